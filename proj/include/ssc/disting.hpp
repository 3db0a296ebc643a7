#pragma once

// Unique distinguishability of NFA states and the ternary witness family
// whose shuffle NFA has every state uniquely distinguishable.

#include <cstddef>
#include <utility>
#include <vector>

#include "ssc/automata.hpp"

namespace ssc {

/// (from, letter, to) with `from` the only state whose letter-successors contain `to`.
struct UniqueInEdge {
  State from;
  std::size_t letter;
  State to;

  auto operator<=>(const UniqueInEdge&) const = default;
  bool operator==(const UniqueInEdge&) const = default;
};

/// All unique in-edges, sorted by (from, letter, to).
std::vector<UniqueInEdge> unique_in_subgraph(const Nfa& a);

/// Backward closure of the single final state under unique in-edges, sorted.
/// Empty unless the NFA has exactly one final state.
std::vector<State> uniquely_distinguishable(const Nfa& a);

/// Sufficient test: every state uniquely distinguishable.
bool subsets_pairwise_distinct(const Nfa& a);

inline constexpr std::size_t kOracleStateLimit = 12;

/// Partition refinement over all 2^N subsets (N <= kOracleStateLimit).
bool brute_subsets_pairwise_distinct(const Nfa& a);
/// Number of equivalence classes among all 2^N subsets.
std::size_t brute_subset_classes(const Nfa& a);

/// K over {a,b,c}: a shifts i -> i+1 (m -> 1), b is constant 1, c sends 1 to 2
/// and everything else to 1, finals {m}. L: a is constant 1, b shifts, c is
/// constant n, finals {n}.
std::pair<Dfa, Dfa> ternary_witness(std::size_t m, std::size_t n);

}  // namespace ssc
