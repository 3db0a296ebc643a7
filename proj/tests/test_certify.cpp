#include <doctest.h>

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <random>

#include "ssc/certify.hpp"
#include "ssc/error.hpp"
#include "support.hpp"

using namespace ssc;

namespace {

// Subset of Q_m x Q_n given column by column (rows listed per column).
ProductSubset from_columns(std::size_t m, const std::vector<std::vector<State>>& columns) {
  std::vector<Cell> cells;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (auto i : columns[j]) cells.push_back({i, static_cast<State>(j + 1)});
  }
  return ProductSubset::from_cells(m, columns.size(), cells);
}

std::vector<std::vector<State>> two_subsets_of_five(const std::vector<std::pair<State, State>>& missing) {
  std::vector<std::vector<State>> out;
  for (State a = 1; a <= 5; ++a) {
    for (State b = a + 1; b <= 5; ++b) {
      if (std::find(missing.begin(), missing.end(), std::pair{a, b}) == missing.end()) out.push_back({a, b});
    }
  }
  return out;
}

void check_permutation_replay(const ProductSubset& s, const Transformation& phi) {
  const auto r = reduce_permutation(s, phi);
  REQUIRE(r.has_value());
  CHECK(r->phi == phi);
  CHECK(r->psi.is_permutation());
  CHECK(r->removed_column != 1);
  CHECK(extremal_step(r->predecessor, r->letter()) == s);
  CHECK(r->predecessor.size() < s.size());
  CHECK(is_valid(r->predecessor));
}

// Width of the subset lattice of an m-set, via Dilworth: |P| minus a maximum
// matching in the strict comparability graph.
std::size_t max_antichain(std::size_t m) {
  const std::size_t count = std::size_t{1} << m;
  std::vector<int> match(count, -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t u, std::vector<bool>& used) {
    for (std::size_t v = 0; v < count; ++v) {
      if (v == u || (u & v) != u || used[v]) continue;
      used[v] = true;
      if (match[v] < 0 || augment(static_cast<std::size_t>(match[v]), used)) {
        match[v] = static_cast<int>(u);
        return true;
      }
    }
    return false;
  };
  std::size_t matching = 0;
  for (std::size_t u = 0; u < count; ++u) {
    std::vector<bool> used(count, false);
    matching += augment(u, used);
  }
  return count - matching;
}

ProductSubset random_valid(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  for (;;) {
    const ProductSubset s(m, n, rng() & ((std::uint64_t{1} << (m * n)) - 1));
    if (is_valid(s)) return s;
  }
}

std::vector<Transformation> permutations(std::size_t m) {
  std::vector<State> p(m);
  std::iota(p.begin(), p.end(), State{1});
  std::vector<Transformation> out;
  do out.emplace_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

TEST_CASE("permutation reduction on the tabulated subsets") {
  // Nine 2-element columns, {4,5} missing.
  const auto table2 = from_columns(5, {{1, 2}, {2, 3}, {1, 3}, {1, 4}, {2, 4}, {3, 4}, {1, 5}, {2, 5}, {3, 5}});
  check_permutation_replay(table2, Transformation{2, 3, 1, 4, 5});
  // One 3-element column and the 2-element columns it does not contain.
  const auto table3 = from_columns(5, {{1, 2, 3}, {1, 4}, {2, 4}, {3, 4}, {1, 5}, {2, 5}, {3, 5}, {4, 5}});
  check_permutation_replay(table3, Transformation{1, 2, 3, 5, 4});
  // Four 3-element columns.
  const auto table4 = from_columns(5, {{2, 3, 4}, {1, 3, 4}, {1, 2, 4}, {1, 2, 3}, {1, 5}, {2, 5}, {3, 5}, {4, 5}});
  check_permutation_replay(table4, Transformation{2, 3, 4, 1, 5});
}

TEST_CASE("permutation reduction on the 5-row case analysis") {
  check_permutation_replay(from_columns(5, two_subsets_of_five({})), Transformation{2, 3, 4, 5, 1});
  check_permutation_replay(from_columns(5, two_subsets_of_five({{4, 5}})), Transformation{2, 3, 1, 4, 5});
  check_permutation_replay(from_columns(5, two_subsets_of_five({{2, 3}, {4, 5}})), Transformation{1, 4, 5, 2, 3});
  check_permutation_replay(from_columns(5, two_subsets_of_five({{3, 4}, {4, 5}})), Transformation{1, 2, 5, 4, 3});
}

TEST_CASE("permutation reduction refuses incomplete classes") {
  // {4,5} missing: the 5-cycle leaves the class of {1,2} incomplete.
  CHECK_FALSE(reduce_permutation(from_columns(5, two_subsets_of_five({{4, 5}})), Transformation{2, 3, 4, 5, 1}));
  CHECK_FALSE(reduce_permutation(from_columns(5, two_subsets_of_five({})), Transformation::identity(5)));
}

TEST_CASE("containment reduction") {
  const ProductSubset full(2, 2, 0b1111);
  const auto r = reduce_containment(full);
  REQUIRE(r.has_value());
  CHECK(r->axis == ContainmentReduction::Axis::Row);
  CHECK(r->from == 1);
  CHECK(r->to == 2);
  CHECK(r->predecessor == ProductSubset::from_cells(2, 2, {{1, 1}, {1, 2}}));
  CHECK(r->letter.s == Transformation::mapping(2, 1, 2));
  CHECK(r->letter.t.is_identity());
  CHECK(extremal_step(r->predecessor, r->letter) == full);
  CHECK_FALSE(reduce_containment(ProductSubset::initial(3, 3)));
  const auto table4 = from_columns(5, {{2, 3, 4}, {1, 3, 4}, {1, 2, 4}, {1, 2, 3}, {1, 5}, {2, 5}, {3, 5}, {4, 5}});
  const auto t4 = reduce_containment(table4);
  CHECK((!t4 || t4->axis == ContainmentReduction::Axis::Row));
}

TEST_CASE("single-element reduction") {
  const auto diag = ProductSubset::from_cells(2, 2, {{1, 1}, {2, 2}});
  const auto r = reduce_single_element(diag);
  REQUIRE(r.has_value());
  CHECK(r->sub.rows() == 1);
  CHECK(embed_sub_instance(r->sub, 2, 2, r->p, r->q) == diag);

  const auto s = ProductSubset::from_cells(3, 2, {{1, 1}, {3, 2}});
  const auto r2 = reduce_single_element(s);
  REQUIRE(r2.has_value());
  auto replay = ProductSubset::initial(3, 2);
  for (std::size_t i = 0; i < r2->anchor_power; ++i) replay = extremal_step(replay, r2->anchor);
  CHECK(replay == single_element_anchor(3, 2, r2->p, r2->q));

  CHECK_FALSE(reduce_single_element(ProductSubset::from_cells(2, 2, {{1, 1}, {2, 1}, {1, 2}, {2, 2}})));
  CHECK_FALSE(reduce_single_element(ProductSubset::from_cells(3, 2, {{1, 1}, {2, 1}, {1, 2}})));
}

TEST_CASE("single-element anchors replay for every cell") {
  for (std::size_t m = 2; m <= 5; ++m) {
    for (std::size_t n = 2; n <= 5; ++n) {
      for (State p = 1; p <= m; ++p) {
        for (State q = 1; q <= n; ++q) {
          const auto anchor = single_element_anchor(m, n, p, q);
          CHECK(anchor.size() == 2);
          CHECK(anchor.contains(p, q));
        }
      }
    }
  }
}

TEST_CASE("reductions replay on random subsets") {
  std::mt19937_64 rng(test::seed());
  const auto perms = permutations(4);
  std::size_t applied = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t m = 2 + rng() % 3, n = 2 + rng() % 4;
    const auto s = random_valid(rng, m, n);
    if (const auto c = reduce_containment(s)) {
      ++applied;
      CHECK(extremal_step(c->predecessor, c->letter) == s);
      CHECK(c->predecessor.size() < s.size());
      CHECK(is_valid(c->predecessor));
    }
    if (const auto e = reduce_single_element(s)) {
      ++applied;
      auto back = embed_sub_instance(e->sub, m, n, e->p, e->q);
      back.insert(e->p, e->q);
      CHECK(back == s);
      CHECK(is_valid(e->sub));
      auto replay = ProductSubset::initial(m, n);
      for (std::size_t i = 0; i < e->anchor_power; ++i) replay = extremal_step(replay, e->anchor);
      CHECK(replay == single_element_anchor(m, n, e->p, e->q));
    }
    if (const auto sh = reduce_shrink(s)) {
      ++applied;
      CHECK(sh->sub.size() == s.size());
      CHECK(is_valid(sh->sub));
    }
    if (m == 4) {
      for (const auto& phi : perms) {
        if (const auto p = reduce_permutation(s, phi)) {
          ++applied;
          CHECK(extremal_step(p->predecessor, p->letter()) == s);
          CHECK(p->predecessor.size() < s.size());
          CHECK(is_valid(p->predecessor));
        }
      }
    }
    if (s.size() >= 3 && m * n <= 12) {
      if (const auto t = find_smaller_predecessor(s)) {
        CHECK(extremal_step(t->first, t->second) == s);
        CHECK(t->first.size() < s.size());
        CHECK(is_valid(t->first));
      }
    }
  }
  CHECK(applied > 100);
}

TEST_CASE("sperner limit matches the width of the subset lattice") {
  CHECK(sperner_limit(1) == 1);
  CHECK(sperner_limit(4) == 6);
  CHECK(sperner_limit(5) == 10);
  for (std::size_t m = 1; m <= 6; ++m) CHECK(sperner_limit(m) == max_antichain(m));
}

TEST_CASE("direct-smaller property") {
  for (auto [m, n] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
    const auto r = direct_smaller_check(m, n);
    CHECK(r.exceptions.empty());
    std::uint64_t expected = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << (m * n)); ++x) {
      const ProductSubset s(m, n, x);
      expected += is_valid(s) && s.size() >= 3;
    }
    CHECK(r.checked == expected);
  }
}

TEST_CASE("orbit representatives partition the valid subsets") {
  for (std::size_t m = 1; m <= 4; ++m) {
    for (std::size_t n = 1; n <= 5; ++n) {
      const OrbitCanon canon(m, n);
      BigInt total = 0;
      for (auto x : canon.representatives()) {
        CHECK(canon.canonical(x) == x);
        total += canon.orbit_size(x);
      }
      CHECK(total == bound_f(m, n));
    }
  }
  std::mt19937_64 rng(test::seed());
  const OrbitCanon canon(3, 4);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_valid(rng, 3, 4);
    // Swap rows 2,3 and columns 2,4.
    std::vector<Cell> moved;
    for (auto [p, q] : s.cells()) moved.push_back({p == 1 ? 1 : 5 - p, q == 2 ? 4 : q == 4 ? 2 : q});
    CHECK(canon.canonical(s.bits()) == canon.canonical(ProductSubset::from_cells(3, 4, moved).bits()));
  }
}

TEST_CASE("certificates for small grids") {
  const auto r = certify(2, 2, {});
  REQUIRE(r.ok());
  const auto& inst = r.certificate.instances.at({2, 2});
  CHECK(inst.entries.front().subset == 1);
  CHECK(inst.entries.front().kind == Justification::Initial);
  CHECK(verify_certificate(r.certificate).ok);
  const auto one = certify(1, 1, {});
  CHECK(one.ok());
  CHECK(verify_certificate(one.certificate).ok);
  const auto r35 = certify(3, 5, {{3, 3}});
  CHECK(r35.ok());
  CHECK(verify_certificate(r35.certificate).ok);
  CHECK_THROWS_AS(certify(6, 2, {}), SizeError);
}

TEST_CASE("base facts and gaps without reductions") {
  CertifyOptions bare;
  bare.use_reductions = false;
  bare.predecessor_search = false;
  const auto r = certify(3, 4, {{3, 3}}, bare);
  CHECK_FALSE(r.ok());
  for (const auto& g : r.gaps) CHECK(g.n == 4);
  CHECK(r.counts.at(Justification::Base) > 0);
  CHECK(r.certificate.instances.at({3, 3}).entries.back().kind == Justification::Base);
  CHECK_FALSE(verify_certificate(r.certificate).ok);

  // Predecessor search only steps down in size, so the two-element sets
  // {(1,1),(p,q)} with p, q > 1 stay open.
  CertifyOptions searched;
  searched.use_reductions = false;
  const auto s = certify(3, 4, {{3, 3}}, searched);
  CHECK(s.counts.at(Justification::BfsEdge) > 0);
  REQUIRE_FALSE(s.gaps.empty());
  for (const auto& g : s.gaps) {
    CHECK(std::popcount(g.subset) == 2);
    CHECK(g.n == 4);
  }
}

TEST_CASE("certificate with a base fact at 4x6") {
  const auto r = certify(4, 7, {{4, 6}});
  REQUIRE(r.ok());
  CHECK(r.gaps.empty());
  for (const auto& e : r.certificate.instances.at({4, 7}).entries) CHECK(e.kind != Justification::Base);
  const auto v = verify_certificate(r.certificate);
  CHECK(v.ok);
}

TEST_CASE("verification rejects damaged certificates") {
  const auto r = certify(3, 4, {});
  REQUIRE(r.ok());
  const auto& original = r.certificate;
  REQUIRE(verify_certificate(original).ok);
  CHECK(certificate_from_json(to_json(original)).instances.size() == original.instances.size());
  CHECK(verify_certificate(certificate_from_json(to_json(original))).ok);

  SUBCASE("corrupted letter") {
    auto c = original;
    bool changed = false;
    for (auto& e : c.instances.at({3, 4}).entries) {
      if (e.letter && e.kind != Justification::SingleElement) {
        e.letter->t = e.letter->t.then(Transformation::transposition(4, 1, 2));
        changed = true;
        const auto v = verify_certificate(c);
        CHECK_FALSE(v.ok);
        REQUIRE_FALSE(v.problems.empty());
        CHECK(v.problems.front().find(std::to_string(e.subset)) != std::string::npos);
        break;
      }
    }
    CHECK(changed);
  }
  SUBCASE("missing entry") {
    auto c = original;
    c.instances.at({3, 4}).entries.pop_back();
    CHECK_FALSE(verify_certificate(c).ok);
  }
  SUBCASE("missing instance") {
    auto c = original;
    c.instances.erase({2, 3});
    CHECK_FALSE(verify_certificate(c).ok);
  }
  SUBCASE("self reference") {
    auto c = original;
    auto& e = c.instances.at({3, 4}).entries.back();
    e.kind = Justification::BfsEdge;
    e.ref_m = 3;
    e.ref_n = 4;
    e.ref_subset = e.subset;
    e.letter = ExtremalLetter{Transformation::identity(3), Transformation::identity(4)};
    CHECK_FALSE(verify_certificate(c).ok);
  }
  SUBCASE("unsupported base fact") {
    auto c = original;
    auto& e = c.instances.at({3, 4}).entries.back();
    e.kind = Justification::Base;
    CHECK_FALSE(verify_certificate(c).ok);
  }
}
