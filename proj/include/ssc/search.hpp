#pragma once

// Exhaustive search over pairs of small DFAs K (m states) and L (n states)
// sharing a k-letter alphabet. Letter i acts as (s_i, t_i) in T_m x T_n.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ssc/automata.hpp"
#include "ssc/shuffle.hpp"

namespace ssc {

inline constexpr double kSearchVolumeGuard = 1e9;

struct SearchOptions {
  /// Only look for pairs meeting f(m,n). Candidates must give every class
  /// (s(1), t(1)) != (1,1) a letter of its own, a necessary condition.
  bool bound_only = false;
  /// Treat pairs differing only in their final states as distinct witnesses.
  bool distinguish_finals = false;
  std::size_t result_cap = 16;
  unsigned workers = 1;
  double volume_guard = kSearchVolumeGuard;
};

struct WitnessPair {
  Dfa left;
  Dfa right;
};

struct SearchResult {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  bool bound_only = false;
  std::size_t max = 0;  // in bound-only mode: f(m,n) if met, else 0
  std::uint64_t bound = 0;
  bool met = false;
  std::uint64_t candidates_evaluated = 0;  // canonical letter multisets examined
  bool distinguish_finals = false;
  std::uint64_t witness_count = 0;         // distinct witness classes
  std::uint64_t witness_pairs = 0;         // distinct pairs counting final states
  std::vector<WitnessPair> witnesses;      // first result_cap classes, least member of each
  std::vector<std::vector<std::uint32_t>> witness_keys;  // all class keys, sorted
};

/// Estimated number of candidates the search would examine.
BigInt search_volume(std::size_t m, std::size_t n, std::size_t k, bool bound_only);

/// Largest kappa(K shuffle L) over pairs with kappa(K) = m, kappa(L) = n.
SearchResult max_shuffle_complexity(std::size_t m, std::size_t n, std::size_t k, const SearchOptions& options = {});

/// Smallest k in [k_min, k_max] admitting a pair that meets f(m,n).
std::optional<std::size_t> min_witness_alphabet(std::size_t m, std::size_t n, std::size_t k_min, std::size_t k_max,
                                                const SearchOptions& options = {});

/// Number of right-hand DFAs, up to state relabeling and letter renaming,
/// that meet f(m,n) with some left DFA over k letters.
std::uint64_t count_nonisomorphic_witness_right_dfas(std::size_t m, std::size_t n, std::size_t k,
                                                     bool ignore_finals, const SearchOptions& options = {});

/// Key identifying a pair up to joint letter renaming, state relabeling of
/// each operand and, when both have the same size, swapping the operands.
/// Without `with_finals` the final states are ignored.
std::vector<std::uint32_t> pair_canonical_key(const Dfa& left, const Dfa& right, bool with_finals = true);

/// The pair rewritten in the letter order and numbering of its key.
WitnessPair canonical_pair(const Dfa& left, const Dfa& right);

nlohmann::json to_json(const SearchResult& r);

}  // namespace ssc
