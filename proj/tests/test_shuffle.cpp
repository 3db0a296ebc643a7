#include <doctest.h>

#include <algorithm>
#include <random>

#include "ssc/error.hpp"
#include "ssc/shuffle.hpp"
#include "ssc/disting.hpp"
#include "support.hpp"

using namespace ssc;

namespace {

// Subsets meeting column 1 and row 1, by inclusion-exclusion.
BigInt inclusion_exclusion(std::size_t m, std::size_t n) {
  const auto p = [](std::size_t e) { return BigInt(1) << e; };
  return p(m * n) - p((m - 1) * n) - p(m * (n - 1)) + p((m - 1) * (n - 1));
}

std::uint64_t brute_valid(std::size_t m, std::size_t n) {
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << (m * n)); ++x) {
    bool row = false, column = false;
    for (std::size_t q = 0; q < n; ++q) row = row || ((x >> q) & 1);
    for (std::size_t p = 0; p < m; ++p) column = column || ((x >> (p * n)) & 1);
    count += row && column;
  }
  return count;
}

bool subset_of(const std::vector<State>& a, const std::vector<State>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_CASE("bound values") {
  CHECK(bound_f(1, 1) == 1);
  CHECK(bound_f(1, 2) == 2);
  CHECK(bound_f(2, 2) == 10);
  CHECK(bound_f(2, 3) == 44);
  for (std::size_t n = 1; n <= 10; ++n) CHECK(bound_f(1, n) == (BigInt(1) << (n - 1)));
  CHECK(bound_f(6, 6) == (BigInt(1) << 35) + (BigInt(1) << 25) * 31 * 31);
  for (std::size_t m = 1; m <= 9; ++m) {
    for (std::size_t n = 1; n <= 9; ++n) {
      CHECK(bound_f(m, n) == inclusion_exclusion(m, n));
      CHECK(bound_f(m, n) == bound_f(n, m));
    }
  }
}

TEST_CASE("valid-subset counts match the bound and a direct scan") {
  for (std::size_t m = 1; m <= 16; ++m) {
    for (std::size_t n = 1; m * n <= 16; ++n) {
      CAPTURE(m);
      CAPTURE(n);
      CHECK(count_valid_subsets(m, n) == bound_f(m, n));
      CHECK(count_valid_subsets(m, n) == brute_valid(m, n));
    }
  }
  CHECK(count_valid_subsets(3, 3) == 400);
  CHECK(count_valid_subsets(2, 4) == 184);
  CHECK_THROWS_AS(count_valid_subsets(5, 5), SizeError);
}

TEST_CASE("validity and projections") {
  CHECK(is_valid(ProductSubset::initial(3, 3)));
  CHECK(is_valid(ProductSubset::from_cells(3, 3, {{2, 1}, {1, 3}})));
  CHECK_FALSE(is_valid(ProductSubset::from_cells(3, 3, {{2, 2}})));
  CHECK_FALSE(is_valid(ProductSubset(2, 2)));
  const auto p = projections(ProductSubset::initial(2, 2));
  CHECK(p.rows == std::vector<State>{1});
  CHECK(p.columns == std::vector<State>{1});
  const auto e = projections(ProductSubset(2, 2));
  CHECK(e.rows.empty());
  CHECK(e.columns.empty());
  CHECK(ProductSubset::from_cells(2, 3, {{2, 3}}).bits() == (std::uint64_t{1} << 5));
}

TEST_CASE("shuffle NFA transition law") {
  const auto [k, l] = ternary_witness(4, 5);
  const auto product = build_shuffle_nfa(k, l);
  const auto& nfa = product.nfa();
  CHECK(nfa.state_count() == 20);
  CHECK(product.cell_of(nfa.initial()) == Cell{1, 1});
  CHECK(nfa.finals() == std::vector<State>{product.state_of(4, 5)});
  for (State p = 1; p <= 4; ++p) {
    for (State q = 1; q <= 5; ++q) {
      for (std::size_t x = 0; x < 3; ++x) {
        std::vector<State> expected{product.state_of(k.next(p, x), q), product.state_of(p, l.next(q, x))};
        std::sort(expected.begin(), expected.end());
        expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
        CHECK(nfa.successors(product.state_of(p, q), x) == expected);
      }
    }
  }
  // a moves down a row, b cycles the last row, c takes (1,1) to (2,1).
  CHECK(nfa.successors(product.state_of(2, 4), 0) ==
        std::vector<State>{product.state_of(2, 1), product.state_of(3, 4)});
  const Dfa other(2, {"x"}, {Transformation{1, 1}}, {1});
  CHECK_THROWS_AS(build_shuffle_nfa(k, other), InputError);
}

TEST_CASE("trivial shuffles") {
  const auto all = universal_dfa({"a", "b"});
  const auto none = empty_language_dfa({"a", "b"});
  CHECK(shuffle_state_complexity(all, all) == 1);
  const auto l = read_dfa_file(test::data_file("witness_2x3_right.json"));
  CHECK(shuffle_state_complexity(empty_language_dfa(l.alphabet()), l) == 1);
  CHECK(shuffle_state_complexity(none, none) == 1);
}

TEST_CASE("example witnesses meet the bound") {
  const auto k1 = read_dfa_file(test::data_file("witness_2x2_left.json"));
  const auto l1 = read_dfa_file(test::data_file("witness_2x2_right.json"));
  CHECK(shuffle_state_complexity(k1, l1) == 10);
  const auto det = determinize(build_shuffle_nfa(k1, l1).nfa());
  CHECK(det.dfa.state_count() >= 10);
  CHECK(minimize(det.dfa).state_count() == 10);
  const auto k2 = read_dfa_file(test::data_file("witness_2x3_left.json"));
  const auto l2 = read_dfa_file(test::data_file("witness_2x3_right.json"));
  CHECK(state_complexity(k2) == 2);
  CHECK(state_complexity(l2) == 3);
  CHECK(shuffle_state_complexity(k2, l2) == 44);
  const auto k3 = read_dfa_file(test::data_file("random_left.json"));
  const auto l3 = read_dfa_file(test::data_file("random_right.json"));
  CHECK(BigInt(shuffle_state_complexity(k3, l3)) < bound_f(state_complexity(k3), state_complexity(l3)));
}

TEST_CASE("okhotin witnesses") {
  CHECK(okhotin_witness(3).alphabet() == std::vector<std::string>{"a1"});
  for (std::size_t n = 3; n <= 7; ++n) {
    const auto l = okhotin_witness(n);
    CHECK(state_complexity(l) == n);
    CHECK(BigInt(shuffle_state_complexity(universal_dfa(l.alphabet()), l)) == ideal_bound(n));
    CHECK(ideal_bound(n) == (BigInt(1) << (n - 2)) + 1);
  }
  CHECK_THROWS_AS(okhotin_witness(2), InputError);
  CHECK_THROWS_AS(ideal_bound(2), InputError);
}

TEST_CASE("alphabet lower bound") {
  CHECK(min_alphabet_lower_bound(2, 2) == 4);
  CHECK(min_alphabet_lower_bound(2, 3) == 5);
  CHECK(min_alphabet_lower_bound(3, 3) == 8);
}

TEST_CASE("reachable subsets are valid and projections grow") {
  std::mt19937_64 rng(test::seed());
  std::size_t violations = 0, pairs = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t m = 1 + rng() % 4, n = 1 + rng() % 4, k = 1 + rng() % 3;
    const auto left = test::random_dfa(rng, m, k);
    const auto right = test::random_dfa(rng, n, k);
    const auto product = build_shuffle_nfa(left, right);
    const auto det = determinize(product.nfa());
    ++pairs;
    auto as_subset = [&](const StateSet& states) {
      std::vector<Cell> cells;
      for (auto s : states) cells.push_back(product.cell_of(s));
      return ProductSubset::from_cells(m, n, cells);
    };
    for (std::size_t i = 0; i < det.subsets.size(); ++i) {
      const auto s = as_subset(det.subsets[i]);
      violations += !is_valid(s);
      const auto before = projections(s);
      for (std::size_t x = 0; x < k; ++x) {
        const auto t = product.step(s, x);
        CHECK(t == as_subset(det.subsets[det.dfa.next(static_cast<State>(i + 1), x) - 1]));
        const auto after = projections(t);
        violations += !subset_of(before.rows, after.rows) || !subset_of(before.columns, after.columns);
      }
    }
    const auto kappa = shuffle_state_complexity(left, right);
    CHECK(BigInt(kappa) <= bound_f(state_complexity(left), state_complexity(right)));
    CHECK(kappa == shuffle_state_complexity(right, left));
  }
  CHECK(pairs >= 100);
  CHECK(violations == 0);
}
