#pragma once

// Shuffle of two complete DFAs: the product NFA, the valid-subset
// condition, the upper bound f(m,n) and friends.

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ssc/automata.hpp"

namespace ssc {

using BigInt = boost::multiprecision::cpp_int;

/// Largest grid (m*n) for brute-force enumeration over all subsets.
inline constexpr std::size_t kEnumerationGuard = 24;

using Cell = std::pair<State, State>;  // (row p, column q), both 1-based

/// A subset of Q_m x Q_n. Cell (p,q) is bit (p-1)*n + (q-1) of `bits()`;
/// this layout is the on-disk encoding as well.
class ProductSubset {
 public:
  static constexpr std::size_t kMaxCells = 64;

  ProductSubset(std::size_t m, std::size_t n, std::uint64_t bits = 0);
  static ProductSubset initial(std::size_t m, std::size_t n);
  static ProductSubset from_cells(std::size_t m, std::size_t n, const std::vector<Cell>& cells);

  static std::size_t index(std::size_t n, State p, State q) { return (p - 1) * n + (q - 1); }

  std::size_t rows() const { return m_; }
  std::size_t columns() const { return n_; }
  std::uint64_t bits() const { return bits_; }
  std::size_t size() const;
  bool empty() const { return bits_ == 0; }

  bool contains(State p, State q) const;
  void insert(State p, State q);
  void erase(State p, State q);

  /// Bit q-1 set iff (p,q) is in the subset.
  std::uint64_t row_mask(State p) const;
  /// Bit p-1 set iff (p,q) is in the subset.
  std::uint64_t column_mask(State q) const;

  std::vector<Cell> cells() const;

  auto operator<=>(const ProductSubset&) const = default;
  bool operator==(const ProductSubset&) const = default;

 private:
  std::size_t m_;
  std::size_t n_;
  std::uint64_t bits_;
};

/// Some state in row 1 and some state in column 1.
bool is_valid(const ProductSubset& s);

struct Projections {
  std::vector<State> rows;     // occupied rows, subset of Q_m
  std::vector<State> columns;  // occupied columns, subset of Q_n
};

Projections projections(const ProductSubset& s);

/// The NFA over Q_m x Q_n with delta((p,q),a) = {(p.a, q), (p, q.a)},
/// initial (1,1) and finals F_K x F_L. NFA state of (p,q) is index+1.
class ShuffleNfa {
 public:
  ShuffleNfa(Dfa left, Dfa right);

  const Dfa& left() const { return left_; }
  const Dfa& right() const { return right_; }
  const Nfa& nfa() const { return nfa_; }
  std::size_t rows() const { return left_.state_count(); }
  std::size_t columns() const { return right_.state_count(); }

  State state_of(State p, State q) const;
  Cell cell_of(State s) const;
  ProductSubset step(const ProductSubset& s, std::size_t letter) const;

 private:
  Dfa left_;
  Dfa right_;
  Nfa nfa_;
};

ShuffleNfa build_shuffle_nfa(const Dfa& left, const Dfa& right);

/// 2^{mn-1} + 2^{(m-1)(n-1)} (2^{m-1}-1)(2^{n-1}-1)
BigInt bound_f(std::size_t m, std::size_t n);

/// Brute-force count of valid subsets of Q_m x Q_n (m*n <= kEnumerationGuard).
BigInt count_valid_subsets(std::size_t m, std::size_t n);

/// State complexity of the shuffle of the two languages.
std::size_t shuffle_state_complexity(const Dfa& left, const Dfa& right);

/// Single-state DFAs for Sigma* and the empty language.
Dfa universal_dfa(std::vector<std::string> alphabet);
Dfa empty_language_dfa(std::vector<std::string> alphabet);

/// n-state DFA over a_1..a_{n-2} for (a_1 S* a_1 | ... | a_{n-2} S* a_{n-2}) S*.
/// State 1 is initial, state i+1 remembers a_i, state n is the accepting sink.
Dfa okhotin_witness(std::size_t n);

/// 2^{n-2} + 1, the bound for Sigma* shuffled with an n-state language, n >= 3.
BigInt ideal_bound(std::size_t n);

/// Proven lower bound on the alphabet size of a witness pair meeting f(m,n).
std::size_t min_alphabet_lower_bound(std::size_t m, std::size_t n);

}  // namespace ssc
