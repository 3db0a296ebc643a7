#include "ssc/shuffle.hpp"

#include <bit>
#include <stdexcept>

#include "ssc/error.hpp"

namespace ssc {

ProductSubset::ProductSubset(std::size_t m, std::size_t n, std::uint64_t bits) : m_(m), n_(n), bits_(bits) {
  if (m == 0 || n == 0) throw std::invalid_argument("grid dimensions must be positive");
  if (m * n > kMaxCells) throw SizeError("grid " + std::to_string(m) + "x" + std::to_string(n) + " exceeds 64 cells");
  if (m * n < kMaxCells && (bits >> (m * n)) != 0) {
    throw std::invalid_argument("subset encoding has bits beyond m*n");
  }
}

ProductSubset ProductSubset::initial(std::size_t m, std::size_t n) { return ProductSubset(m, n, 1); }

ProductSubset ProductSubset::from_cells(std::size_t m, std::size_t n, const std::vector<Cell>& cells) {
  ProductSubset s(m, n);
  for (auto [p, q] : cells) s.insert(p, q);
  return s;
}

std::size_t ProductSubset::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

bool ProductSubset::contains(State p, State q) const {
  if (p < 1 || p > m_ || q < 1 || q > n_) throw std::out_of_range("cell outside the grid");
  return (bits_ >> index(n_, p, q)) & 1U;
}

void ProductSubset::insert(State p, State q) {
  if (p < 1 || p > m_ || q < 1 || q > n_) throw std::out_of_range("cell outside the grid");
  bits_ |= std::uint64_t{1} << index(n_, p, q);
}

void ProductSubset::erase(State p, State q) {
  if (p < 1 || p > m_ || q < 1 || q > n_) throw std::out_of_range("cell outside the grid");
  bits_ &= ~(std::uint64_t{1} << index(n_, p, q));
}

std::uint64_t ProductSubset::row_mask(State p) const {
  const std::uint64_t full = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
  return (bits_ >> ((p - 1) * n_)) & full;
}

std::uint64_t ProductSubset::column_mask(State q) const {
  std::uint64_t mask = 0;
  for (State p = 1; p <= m_; ++p) {
    if ((bits_ >> index(n_, p, q)) & 1U) mask |= std::uint64_t{1} << (p - 1);
  }
  return mask;
}

std::vector<Cell> ProductSubset::cells() const {
  std::vector<Cell> out;
  for (std::uint64_t b = bits_; b; b &= b - 1) {
    const auto i = static_cast<std::size_t>(std::countr_zero(b));
    out.emplace_back(static_cast<State>(i / n_ + 1), static_cast<State>(i % n_ + 1));
  }
  return out;
}

bool is_valid(const ProductSubset& s) { return s.row_mask(1) != 0 && s.column_mask(1) != 0; }

Projections projections(const ProductSubset& s) {
  Projections out;
  for (State p = 1; p <= s.rows(); ++p) {
    if (s.row_mask(p)) out.rows.push_back(p);
  }
  for (State q = 1; q <= s.columns(); ++q) {
    if (s.column_mask(q)) out.columns.push_back(q);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Nfa make_product_nfa(const Dfa& left, const Dfa& right) {
  const std::size_t m = left.state_count();
  const std::size_t n = right.state_count();
  auto id = [n](State p, State q) { return static_cast<State>(ProductSubset::index(n, p, q) + 1); };
  std::vector<State> finals;
  for (State p : left.finals()) {
    for (State q : right.finals()) finals.push_back(id(p, q));
  }
  Nfa nfa(m * n, left.alphabet(), id(left.initial(), right.initial()), std::move(finals));
  for (State p = 1; p <= m; ++p) {
    for (State q = 1; q <= n; ++q) {
      for (std::size_t x = 0; x < left.letter_count(); ++x) {
        nfa.add_transition(id(p, q), x, id(left.next(p, x), q));
        nfa.add_transition(id(p, q), x, id(p, right.next(q, x)));
      }
    }
  }
  return nfa;
}

}  // namespace

ShuffleNfa::ShuffleNfa(Dfa left, Dfa right)
    : left_(std::move(left)), right_(std::move(right)), nfa_(make_product_nfa(left_, right_)) {}

State ShuffleNfa::state_of(State p, State q) const {
  if (p < 1 || p > rows() || q < 1 || q > columns()) throw std::out_of_range("cell outside the grid");
  return static_cast<State>(ProductSubset::index(columns(), p, q) + 1);
}

Cell ShuffleNfa::cell_of(State s) const {
  if (s < 1 || s > rows() * columns()) throw std::out_of_range("product state out of range");
  return {static_cast<State>((s - 1) / columns() + 1), static_cast<State>((s - 1) % columns() + 1)};
}

ProductSubset ShuffleNfa::step(const ProductSubset& s, std::size_t letter) const {
  ProductSubset out(rows(), columns());
  for (auto [p, q] : s.cells()) {
    out.insert(left_.next(p, letter), q);
    out.insert(p, right_.next(q, letter));
  }
  return out;
}

ShuffleNfa build_shuffle_nfa(const Dfa& left, const Dfa& right) {
  if (left.alphabet() != right.alphabet()) {
    throw InputError("shuffle operands must share the same alphabet");
  }
  return ShuffleNfa(left, right);
}

// ---------------------------------------------------------------------------

BigInt bound_f(std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw InputError("bound_f needs m, n >= 1");
  const BigInt one = 1;
  return (one << (m * n - 1)) +
         (one << ((m - 1) * (n - 1))) * ((one << (m - 1)) - 1) * ((one << (n - 1)) - 1);
}

BigInt count_valid_subsets(std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw InputError("grid dimensions must be positive");
  if (m * n > kEnumerationGuard) {
    throw SizeError("count_valid_subsets: m*n = " + std::to_string(m * n) + " exceeds the enumeration guard of " +
                    std::to_string(kEnumerationGuard));
  }
  const std::uint64_t row1 = (std::uint64_t{1} << n) - 1;
  std::uint64_t col1 = 0;
  for (std::size_t p = 0; p < m; ++p) col1 |= std::uint64_t{1} << (p * n);
  std::uint64_t count = 0;
  const std::uint64_t total = std::uint64_t{1} << (m * n);
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    if ((bits & row1) && (bits & col1)) ++count;
  }
  return BigInt(count);
}

std::size_t shuffle_state_complexity(const Dfa& left, const Dfa& right) {
  const auto product = build_shuffle_nfa(left, right);
  return state_complexity(determinize(product.nfa()).dfa);
}

Dfa universal_dfa(std::vector<std::string> alphabet) {
  std::vector<Transformation> delta(alphabet.size(), Transformation::identity(1));
  return Dfa(1, std::move(alphabet), std::move(delta), {1});
}

Dfa empty_language_dfa(std::vector<std::string> alphabet) {
  std::vector<Transformation> delta(alphabet.size(), Transformation::identity(1));
  return Dfa(1, std::move(alphabet), std::move(delta), {});
}

Dfa okhotin_witness(std::size_t n) {
  if (n < 3) throw InputError("okhotin_witness needs n >= 3");
  const std::size_t letters = n - 2;
  const auto sink = static_cast<State>(n);
  std::vector<std::string> alphabet;
  std::vector<Transformation> delta;
  for (std::size_t i = 1; i <= letters; ++i) {
    alphabet.push_back("a" + std::to_string(i));
    const auto remember = static_cast<State>(i + 1);
    std::vector<State> images(n);
    for (State q = 1; q <= n; ++q) images[q - 1] = q;  // other memory states ignore a_i
    images[0] = remember;
    images[remember - 1] = sink;
    delta.emplace_back(std::move(images));
  }
  return Dfa(n, std::move(alphabet), std::move(delta), {sink});
}

BigInt ideal_bound(std::size_t n) {
  if (n < 3) throw InputError("ideal_bound needs n >= 3; for n = 2 the bound is f(1,2) = 2");
  return (BigInt(1) << (n - 2)) + 1;
}

std::size_t min_alphabet_lower_bound(std::size_t m, std::size_t n) {
  if (m < 2 || n < 2) throw InputError("min_alphabet_lower_bound needs m, n >= 2");
  // 2x2 is the known exception to mn-1.
  if (m == 2 && n == 2) return 4;
  return m * n - 1;
}

}  // namespace ssc
