#pragma once

// Reachability certificates for D_{m,n} built from the inductive reductions:
// row/column containment, a single isolated element, and column classes under
// a row permutation. Subsets are handled up to relabeling of rows 2..m and
// columns 2..n, which maps D_{m,n} onto itself and fixes {(1,1)}.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ssc/reach.hpp"
#include "ssc/shuffle.hpp"

namespace ssc {

struct ContainmentReduction {
  enum class Axis { Row, Column };
  ProductSubset predecessor;
  ExtremalLetter letter;  // (i -> i'; 1) or (1; j -> j')
  Axis axis;
  State from;  // contained row/column i (or j)
  State to;    // containing row/column i' (or j')
};

/// First ordered pair (rows before columns, row-major) where one line
/// contains another and removing the duplicated entries keeps the subset
/// valid. Lines must be nonempty.
std::optional<ContainmentReduction> reduce_containment(const ProductSubset& s);

struct SingleElementReduction {
  State p;                   // isolated cell (p,q)
  State q;
  ProductSubset sub;         // S without row p and column q, renumbered
  ExtremalLetter anchor;     // a: (1,p);(1,q) or the variant for p = 1 / q = 1
  std::size_t anchor_power;  // a^power sends {(1,1)} to the anchor pair
};

/// Needs m, n >= 2 and a cell alone in both its row and its column, with the
/// remaining cells forming a valid subset of the (m-1) x (n-1) grid.
std::optional<SingleElementReduction> reduce_single_element(const ProductSubset& s);

/// The two-element set {(r(1), c(1)), (p,q)} reached from {(1,1)} by the anchor
/// word, where r and c are the order-preserving renumberings skipping p and q.
ProductSubset single_element_anchor(std::size_t m, std::size_t n, State p, State q);

/// Inverse of the renumbering: places `sub` into the m x n grid around (p,q)
/// and adds (p,q) itself.
ProductSubset embed_sub_instance(const ProductSubset& sub, std::size_t m, std::size_t n, State p, State q);

struct PermutationReduction {
  ProductSubset predecessor;
  Transformation phi;
  Transformation psi;
  State removed_column;  // k

  ExtremalLetter letter() const { return {phi, psi}; }
};

/// Columns must be nonempty and pairwise distinct and row 1 must hold two
/// cells. Applies when phi maps cols(S) into itself and moves some column.
std::optional<PermutationReduction> reduce_permutation(const ProductSubset& s, const Transformation& phi);

/// Deletes an empty row or column (index >= 2) and shifts higher indices down.
struct ShrinkReduction {
  State deleted_row = 0;     // 0 when a column is deleted
  State deleted_column = 0;  // 0 when a row is deleted
  ProductSubset sub;
};
std::optional<ShrinkReduction> reduce_shrink(const ProductSubset& s);
ProductSubset delete_line(const ProductSubset& s, State row, State column);

/// C(m, floor(m/2)).
std::uint64_t sperner_limit(std::size_t m);

struct PredecessorSearch {
  /// Letters tried per subset; 0 means all of T_m x T_n.
  std::uint64_t letter_budget = 0;
};

/// Some valid T with |T| < |S| and extremal_step(T, a) = S.
std::optional<std::pair<ProductSubset, ExtremalLetter>> find_smaller_predecessor(
    const ProductSubset& s, const PredecessorSearch& options = {});

struct DirectSmallerReport {
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t checked = 0;  // valid subsets with |S| >= 3
  std::vector<std::uint64_t> exceptions;
};

/// Every valid S with |S| >= 3 has a valid smaller direct predecessor (m*n <= 16).
DirectSmallerReport direct_smaller_check(std::size_t m, std::size_t n);

// ---------------------------------------------------------------------------

/// Relabeling of rows 2..m and columns 2..n.
class OrbitCanon {
 public:
  OrbitCanon(std::size_t m, std::size_t n);

  std::size_t rows() const { return m_; }
  std::size_t columns() const { return n_; }

  /// Least element of the orbit: columns 2..n sorted by row mask, minimised
  /// over all row relabelings.
  std::uint64_t canonical(std::uint64_t bits) const;
  /// Orbit size of a canonical subset.
  std::uint64_t orbit_size(std::uint64_t canonical_bits) const;
  /// All canonical valid subsets, ascending.
  std::vector<std::uint64_t> representatives() const;

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<std::vector<std::uint8_t>> row_perms_;  // images of rows 0..m-1
};

enum class Justification { Initial, Shrink, Containment, SingleElement, Permutation, Base, BfsEdge };

std::string to_string(Justification j);
std::optional<Justification> justification_from_string(std::string_view s);

struct CertificateEntry {
  std::uint64_t subset = 0;  // canonical representative
  Justification kind = Justification::Initial;
  // Instance and subset the step starts from; the subset need not be canonical.
  std::size_t ref_m = 0;
  std::size_t ref_n = 0;
  std::uint64_t ref_subset = 0;
  std::optional<ExtremalLetter> letter;  // Containment, Permutation, BfsEdge; anchor letter for SingleElement
  std::size_t anchor_power = 0;          // SingleElement
  State row = 0;                         // Shrink: deleted row; Containment: from; SingleElement: p
  State column = 0;                      // Shrink: deleted column; Containment: to; SingleElement: q
  std::string axis;                      // Containment: "row" | "column"
  State removed_column = 0;              // Permutation
};

struct InstanceCertificate {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<CertificateEntry> entries;  // sorted by subset
};

struct Certificate {
  std::size_t m = 0;
  std::size_t n = 0;
  std::set<std::pair<std::size_t, std::size_t>> base_facts;
  std::map<std::pair<std::size_t, std::size_t>, InstanceCertificate> instances;
};

struct CertifyOptions {
  /// Shrink, containment, single-element and permutation steps. Without
  /// them only base facts and predecessor search remain.
  bool use_reductions = true;
  /// Fallback search for subsets no reduction handles.
  bool predecessor_search = true;
  PredecessorSearch search;
};

struct CertifyGap {
  std::size_t m;
  std::size_t n;
  std::uint64_t subset;
};

struct CertifyResult {
  Certificate certificate;
  std::vector<CertifyGap> gaps;  // empty iff the certificate is complete
  std::map<Justification, std::uint64_t> counts;

  bool ok() const { return gaps.empty(); }
};

/// Certificates for every instance m' <= m, n' <= n. Base facts (m0, n0)
/// assert full reachability in D_{m0,n0} and cover every instance inside
/// either orientation of that grid.
CertifyResult certify(std::size_t m, std::size_t n, const std::set<std::pair<std::size_t, std::size_t>>& base_facts,
                      const CertifyOptions& options = {});

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Replays every entry and checks coverage and well-foundedness.
VerifyResult verify_certificate(const Certificate& c);

nlohmann::json to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CertifyResult& r, bool include_certificate);

}  // namespace ssc
