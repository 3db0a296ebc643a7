#pragma once

// Reachability in the extremal subset automaton D_{m,n}, whose alphabet
// carries one letter for every pair (s, t) in T_m x T_n.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssc/automata.hpp"
#include "ssc/shuffle.hpp"

namespace ssc {

/// Letter a_{s,t}: acts as s on Q_m and as t on Q_n. Ordered
/// lexicographically by (images of s, images of t).
struct ExtremalLetter {
  Transformation s;
  Transformation t;

  auto operator<=>(const ExtremalLetter&) const = default;
  bool operator==(const ExtremalLetter&) const = default;
};

std::string to_string(const ExtremalLetter& a);

/// S.a = {(s(p), q)} u {(p, t(q))} over (p,q) in S.
ProductSubset extremal_step(const ProductSubset& s, const ExtremalLetter& a);

/// Number of transformations n^n, or nullopt when it does not fit 64 bits.
std::optional<std::uint64_t> transformation_count(std::size_t n);

/// The transformation with lexicographic rank `rank` in T_n.
Transformation transformation_at(std::size_t n, std::uint64_t rank);
std::uint64_t transformation_rank(const Transformation& t);

/// Letter set driving an exploration: either the whole of T_m x T_n
/// (iterated lazily, never materialized) or an explicit list.
class ExtremalAlphabet {
 public:
  static ExtremalAlphabet full(std::size_t m, std::size_t n);
  static ExtremalAlphabet letters(std::size_t m, std::size_t n, std::vector<ExtremalLetter> letters);

  std::size_t rows() const { return m_; }
  std::size_t columns() const { return n_; }
  bool is_full() const { return full_; }
  const std::vector<ExtremalLetter>& letters() const { return letters_; }
  /// "full", or the SHA-256 of the canonical JSON letter list.
  const std::string& id() const { return id_; }

 private:
  ExtremalAlphabet(std::size_t m, std::size_t n, bool full, std::vector<ExtremalLetter> letters);

  std::size_t m_;
  std::size_t n_;
  bool full_;
  std::vector<ExtremalLetter> letters_;
  std::string id_;
};

// Letter-list file: JSON array of {"s": [images], "t": [images]}.
nlohmann::json letters_to_json(const std::vector<ExtremalLetter>& letters);
std::vector<ExtremalLetter> letters_from_json(const nlohmann::json& j, std::size_t m, std::size_t n,
                                              std::string_view source = "<json>");
std::vector<ExtremalLetter> read_letter_file(const std::filesystem::path& path, std::size_t m, std::size_t n);
void write_letter_file(const std::filesystem::path& path, const std::vector<ExtremalLetter>& letters);

struct ReachReport {
  static constexpr std::size_t kSampleLimit = 32;

  std::size_t m = 0;
  std::size_t n = 0;
  std::string alphabet;     // "full" or "letters"
  std::string alphabet_id;  // "full" or letter-list hash
  std::size_t letter_count = 0;
  std::uint64_t bound = 0;
  std::uint64_t reached = 0;
  bool complete = false;
  std::vector<std::uint64_t> unreached_sample;  // valid encodings, ascending
  std::size_t generations = 0;
  double elapsed_seconds = 0;
  std::string lineage;

  /// Equality of everything except wall-clock time.
  bool same_outcome(const ReachReport& other) const;
};

nlohmann::json to_json(const ReachReport& r);

struct BfsOptions {
  unsigned workers = 1;
  std::optional<std::filesystem::path> checkpoint_dir;
  bool resume = false;
  /// Stop (leaving the checkpoint in place) after this many generations
  /// have been completed in total.
  std::optional<std::size_t> stop_after_generations;
};

/// Breadth-first fixpoint from {(1,1)}. Requires m*n <= kEnumerationGuard.
ReachReport bfs_reach(std::size_t m, std::size_t n, const ExtremalAlphabet& alphabet,
                      const BfsOptions& options = {});

/// Every valid subset reachable with exactly these letters.
bool alphabet_sufficiency(std::size_t m, std::size_t n, const std::vector<ExtremalLetter>& letters);

/// Adds, one at a time, the letter reaching the most new subsets (ties go to
/// the lexicographically smallest letter) until everything valid is reached,
/// then drops letters that turn out to be redundant. No minimality claim.
std::vector<ExtremalLetter> greedy_alphabet(std::size_t m, std::size_t n);

}  // namespace ssc
