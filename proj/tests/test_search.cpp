#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ssc/error.hpp"
#include "ssc/reach.hpp"
#include "ssc/search.hpp"
#include "support.hpp"

using namespace ssc;

namespace {

// Maximum over every pair (letter sequence, final sets) with kappa = (m, n),
// no deduplication at all.
std::size_t brute_max(std::size_t m, std::size_t n, std::size_t k) {
  const auto tm = *transformation_count(m), tn = *transformation_count(n);
  const std::uint64_t letters = tm * tn;
  std::uint64_t sequences = 1;
  for (std::size_t i = 0; i < k; ++i) sequences *= letters;
  std::size_t best = 0;
  for (std::uint64_t code = 0; code < sequences; ++code) {
    std::vector<Transformation> left, right;
    auto c = code;
    for (std::size_t i = 0; i < k; ++i, c /= letters) {
      left.push_back(transformation_at(m, (c % letters) / tn));
      right.push_back(transformation_at(n, (c % letters) % tn));
    }
    for (std::uint32_t fk = 1; fk + 1 < (1u << m); ++fk) {
      std::vector<State> finals_k;
      for (State q = 1; q <= m; ++q) {
        if (fk >> (q - 1) & 1) finals_k.push_back(q);
      }
      const Dfa kd(m, test::letters(k), left, finals_k);
      if (state_complexity(kd) != m) continue;
      for (std::uint32_t fl = 1; fl + 1 < (1u << n); ++fl) {
        std::vector<State> finals_l;
        for (State q = 1; q <= n; ++q) {
          if (fl >> (q - 1) & 1) finals_l.push_back(q);
        }
        const Dfa ld(n, test::letters(k), right, finals_l);
        if (state_complexity(ld) != n) continue;
        best = std::max(best, shuffle_state_complexity(kd, ld));
      }
    }
  }
  return best;
}

SearchOptions exact(unsigned workers = 1) {
  SearchOptions o;
  o.workers = workers;
  return o;
}

}  // namespace

TEST_CASE("maxima agree with undeduplicated enumeration") {
  CHECK(max_shuffle_complexity(2, 2, 1).max == brute_max(2, 2, 1));
  CHECK(max_shuffle_complexity(2, 2, 2).max == brute_max(2, 2, 2));
  CHECK(max_shuffle_complexity(2, 2, 3).max == brute_max(2, 2, 3));
  CHECK(max_shuffle_complexity(2, 2, 2).max == 7);
}

TEST_CASE("maxima grow with the alphabet") {
  std::size_t previous = 0;
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto r = max_shuffle_complexity(2, 2, k);
    CHECK(r.max >= previous);
    previous = r.max;
  }
  CHECK(max_shuffle_complexity(2, 2, 3).max < 10);
  CHECK(previous == 10);
}

TEST_CASE("the 2x2 witness is unique and matches the fixture") {
  const auto r = max_shuffle_complexity(2, 2, 4);
  CHECK(r.max == 10);
  CHECK(r.met);
  CHECK(r.witness_count == 1);
  REQUIRE(r.witnesses.size() == 1);
  const auto k = read_dfa_file(test::data_file("witness_2x2_left.json"));
  const auto l = read_dfa_file(test::data_file("witness_2x2_right.json"));
  const auto& w = r.witnesses.front();
  CHECK(pair_canonical_key(w.left, w.right, false) == pair_canonical_key(k, l, false));
  CHECK(shuffle_state_complexity(w.left, w.right) == 10);
  CHECK(r.witness_pairs >= 1);
  SearchOptions strict;
  strict.distinguish_finals = true;
  const auto s = max_shuffle_complexity(2, 2, 4, strict);
  CHECK(s.witness_count == s.witness_pairs);
  CHECK(std::any_of(s.witnesses.begin(), s.witnesses.end(), [&](const WitnessPair& p) {
    return pair_canonical_key(p.left, p.right) == pair_canonical_key(k, l);
  }));
}

TEST_CASE("witnesses re-verify") {
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto r = max_shuffle_complexity(2, 2, k);
    for (const auto& w : r.witnesses) {
      CHECK(shuffle_state_complexity(w.left, w.right) == r.max);
      CHECK(state_complexity(w.left) == 2);
      CHECK(state_complexity(w.right) == 2);
      CHECK(dfa_from_json(dfa_to_json(w.left)) == w.left);
    }
  }
}

TEST_CASE("minimal witness alphabets for 2x2") {
  CHECK(min_witness_alphabet(2, 2, 1, 5) == std::optional<std::size_t>{4});
  CHECK_FALSE(min_witness_alphabet(2, 2, 1, 3).has_value());
  CHECK(min_witness_alphabet(2, 3, 1, 5) == std::nullopt);
}

TEST_CASE("counting right operands") {
  CHECK(count_nonisomorphic_witness_right_dfas(2, 2, 4, true) == 1);
  CHECK(count_nonisomorphic_witness_right_dfas(2, 2, 3, true) == 0);
  CHECK(count_nonisomorphic_witness_right_dfas(2, 2, 3, false) == 0);
}

TEST_CASE("results do not depend on the worker count") {
  const auto a = to_json(max_shuffle_complexity(2, 2, 3, exact(1)));
  const auto b = to_json(max_shuffle_complexity(2, 2, 3, exact(3)));
  CHECK(a == b);
  SearchOptions bound;
  bound.bound_only = true;
  bound.workers = 2;
  const auto c = max_shuffle_complexity(2, 2, 4, bound);
  bound.workers = 1;
  CHECK(to_json(c) == to_json(max_shuffle_complexity(2, 2, 4, bound)));
}

TEST_CASE("pair keys ignore relabeling, letter order and operand order") {
  std::mt19937_64 rng(test::seed());
  for (int trial = 0; trial < 100; ++trial) {
    const auto k = test::random_dfa(rng, 3, 3);
    const auto l = test::random_dfa(rng, 3, 3);
    std::vector<State> p{1, 2, 3};
    std::shuffle(p.begin() + 1, p.end(), rng);
    std::vector<std::size_t> order{0, 1, 2};
    std::shuffle(order.begin(), order.end(), rng);
    const auto k2 = k.relabeled(Transformation(p)).with_letter_order(order);
    const auto l2 = l.with_letter_order(order);
    CHECK(pair_canonical_key(k, l) == pair_canonical_key(k2, l2));
    CHECK(pair_canonical_key(k, l) == pair_canonical_key(l2, k2));
    CHECK(pair_canonical_key(k, l, false) == pair_canonical_key(k.with_finals({1}), l, false));
  }
}

TEST_CASE("guards") {
  CHECK_THROWS_AS(max_shuffle_complexity(3, 3, 8), SizeError);
  CHECK_THROWS_AS(max_shuffle_complexity(4, 4, 2), SizeError);
  CHECK_THROWS_AS(max_shuffle_complexity(2, 2, 0), InputError);
  CHECK(search_volume(2, 2, 4, false) == 3876 * 4);
  try {
    max_shuffle_complexity(3, 3, 8);
  } catch (const SizeError& e) {
    CHECK(std::string(e.what()).find("volume") != std::string::npos);
  }
}
