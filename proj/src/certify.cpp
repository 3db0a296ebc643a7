#include "ssc/certify.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "ssc/error.hpp"

namespace ssc {

namespace {

// Raw row/column access on the row-major encoding.
struct Grid {
  std::size_t m;
  std::size_t n;

  std::uint64_t bit(State p, State q) const { return std::uint64_t{1} << ((p - 1) * n + (q - 1)); }
  std::uint32_t row(std::uint64_t s, State p) const {
    return static_cast<std::uint32_t>((s >> ((p - 1) * n)) & ((std::uint64_t{1} << n) - 1));
  }
  std::uint32_t column(std::uint64_t s, State q) const {
    std::uint32_t mask = 0;
    for (State p = 1; p <= m; ++p) {
      if (s & bit(p, q)) mask |= std::uint32_t{1} << (p - 1);
    }
    return mask;
  }
  std::uint64_t from_columns(const std::vector<std::uint32_t>& cols) const {
    std::uint64_t s = 0;
    for (State q = 1; q <= n; ++q) {
      for (State p = 1; p <= m; ++p) {
        if ((cols[q - 1] >> (p - 1)) & 1U) s |= bit(p, q);
      }
    }
    return s;
  }
  std::vector<std::uint32_t> columns(std::uint64_t s) const {
    std::vector<std::uint32_t> cols(n, 0);
    for (std::uint64_t b = s; b; b &= b - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(b));
      cols[i % n] |= std::uint32_t{1} << (i / n);
    }
    return cols;
  }
  bool valid(std::uint64_t s) const { return row(s, 1) != 0 && column(s, 1) != 0; }
};

std::uint32_t map_mask(std::uint32_t mask, std::span<const State> images) {
  std::uint32_t out = 0;
  for (std::uint32_t b = mask; b; b &= b - 1) out |= std::uint32_t{1} << (images[std::countr_zero(b)] - 1);
  return out;
}

std::uint64_t step_bits(const Grid& g, std::uint64_t s, std::span<const State> sa, std::span<const State> ta) {
  std::uint64_t out = 0;
  for (std::uint64_t b = s; b; b &= b - 1) {
    const auto i = static_cast<std::size_t>(std::countr_zero(b));
    const State p = static_cast<State>(i / g.n + 1);
    const State q = static_cast<State>(i % g.n + 1);
    out |= g.bit(sa[p - 1], q) | g.bit(p, ta[q - 1]);
  }
  return out;
}

std::uint64_t factorial(std::size_t k) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// Reductions

std::optional<ContainmentReduction> reduce_containment(const ProductSubset& s) {
  const Grid g{s.rows(), s.columns()};
  const std::uint64_t bits = s.bits();
  for (State i = 1; i <= g.m; ++i) {
    const auto ri = g.row(bits, i);
    if (!ri) continue;
    for (State i2 = 1; i2 <= g.m; ++i2) {
      if (i2 == i || (ri & ~g.row(bits, i2))) continue;
      const std::uint64_t removed = std::uint64_t{ri} << ((i2 - 1) * g.n);
      const std::uint64_t pred = bits & ~removed;
      if (!g.valid(pred)) continue;
      return ContainmentReduction{ProductSubset(g.m, g.n, pred),
                                  {Transformation::mapping(g.m, i, i2), Transformation::identity(g.n)},
                                  ContainmentReduction::Axis::Row, i, i2};
    }
  }
  for (State j = 1; j <= g.n; ++j) {
    const auto cj = g.column(bits, j);
    if (!cj) continue;
    for (State j2 = 1; j2 <= g.n; ++j2) {
      if (j2 == j || (cj & ~g.column(bits, j2))) continue;
      std::uint64_t pred = bits;
      for (State p = 1; p <= g.m; ++p) {
        if ((cj >> (p - 1)) & 1U) pred &= ~g.bit(p, j2);
      }
      if (!g.valid(pred)) continue;
      return ContainmentReduction{ProductSubset(g.m, g.n, pred),
                                  {Transformation::identity(g.m), Transformation::mapping(g.n, j, j2)},
                                  ContainmentReduction::Axis::Column, j, j2};
    }
  }
  return std::nullopt;
}

ProductSubset delete_line(const ProductSubset& s, State row, State column) {
  const std::size_t m = s.rows() - (row ? 1 : 0);
  const std::size_t n = s.columns() - (column ? 1 : 0);
  if (m == 0 || n == 0) throw InputError("cannot delete the only row or column");
  ProductSubset out(m, n);
  for (auto [p, q] : s.cells()) {
    if (p == row || q == column) continue;
    out.insert(row && p > row ? p - 1 : p, column && q > column ? q - 1 : q);
  }
  return out;
}

std::optional<ShrinkReduction> reduce_shrink(const ProductSubset& s) {
  for (State p = 2; p <= s.rows(); ++p) {
    if (!s.row_mask(p)) return ShrinkReduction{p, 0, delete_line(s, p, 0)};
  }
  for (State q = 2; q <= s.columns(); ++q) {
    if (!s.column_mask(q)) return ShrinkReduction{0, q, delete_line(s, 0, q)};
  }
  return std::nullopt;
}

ProductSubset single_element_anchor(std::size_t m, std::size_t n, State p, State q) {
  ProductSubset out(m, n);
  out.insert(p == 1 ? 2 : 1, q == 1 ? 2 : 1);
  out.insert(p, q);
  return out;
}

ProductSubset embed_sub_instance(const ProductSubset& sub, std::size_t m, std::size_t n, State p, State q) {
  if (sub.rows() + 1 != m || sub.columns() + 1 != n) throw InputError("sub-instance has the wrong shape");
  ProductSubset out(m, n);
  for (auto [i, j] : sub.cells()) out.insert(i >= p ? i + 1 : i, j >= q ? j + 1 : j);
  out.insert(p, q);
  return out;
}

std::optional<SingleElementReduction> reduce_single_element(const ProductSubset& s) {
  const std::size_t m = s.rows();
  const std::size_t n = s.columns();
  if (m < 2 || n < 2) return std::nullopt;
  for (auto [p, q] : s.cells()) {
    if (std::popcount(s.row_mask(p)) != 1 || std::popcount(s.column_mask(q)) != 1) continue;
    auto sub = delete_line(s, p, q);
    if (!is_valid(sub)) continue;
    // The word a^2 of the proof returns to {(1,1),(2,q)} when exactly one of
    // p, q is 1; there the anchor is a itself.
    const State row_partner = p == 1 ? 2 : p;
    const State column_partner = q == 1 ? 2 : q;
    ExtremalLetter anchor{Transformation::transposition(m, 1, row_partner),
                          Transformation::transposition(n, 1, column_partner)};
    const std::size_t power = (p == 1) == (q == 1) ? 2 : 1;
    return SingleElementReduction{p, q, std::move(sub), std::move(anchor), power};
  }
  return std::nullopt;
}

std::optional<PermutationReduction> reduce_permutation(const ProductSubset& s, const Transformation& phi) {
  const Grid g{s.rows(), s.columns()};
  if (phi.size() != g.m || !phi.is_permutation()) throw InputError("phi must be a permutation of the rows");
  const auto cols = g.columns(s.bits());
  if (std::popcount(g.row(s.bits(), 1)) < 2) return std::nullopt;
  std::unordered_map<std::uint32_t, State> where;
  for (State j = 1; j <= g.n; ++j) {
    if (!cols[j - 1] || !where.emplace(cols[j - 1], j).second) return std::nullopt;
  }
  const auto images = phi.images();
  const auto inverse = phi.inverse();
  State k = 0;
  for (State j = 1; j <= g.n; ++j) {
    const auto image = map_mask(cols[j - 1], images);
    if (!where.count(image)) return std::nullopt;
    if (!k && j != 1 && image != cols[j - 1]) k = j;
  }
  if (!k) return std::nullopt;
  std::vector<State> psi(g.n);
  std::vector<std::uint32_t> pred(g.n, 0);
  for (State j = 1; j <= g.n; ++j) {
    const auto pre = map_mask(cols[j - 1], inverse.images());
    psi[j - 1] = where.at(pre);
    if (j != k) pred[j - 1] = pre;
  }
  return PermutationReduction{ProductSubset(g.m, g.n, g.from_columns(pred)), phi, Transformation(std::move(psi)), k};
}

std::uint64_t sperner_limit(std::size_t m) {
  if (m == 0) throw InputError("sperner_limit needs m >= 1");
  std::uint64_t c = 1;
  const std::size_t k = m / 2;
  for (std::size_t i = 1; i <= k; ++i) c = c * (m - k + i) / i;
  return c;
}

// ---------------------------------------------------------------------------
// Predecessor search

namespace {

using Accept = std::function<bool(std::uint64_t)>;

std::optional<std::pair<std::uint64_t, ExtremalLetter>> search_predecessor(const Grid& g, std::uint64_t s,
                                                                           const PredecessorSearch& options,
                                                                           const Accept& accept) {
  const auto count_m = transformation_count(g.m);
  const auto count_n = transformation_count(g.n);
  if (!count_m || !count_n) throw SizeError("predecessor search: transformation monoid too large");
  const auto size = std::popcount(s);
  const auto rows_of = [&](std::uint64_t bits) {
    std::vector<std::uint32_t> r(g.m);
    for (State p = 1; p <= g.m; ++p) r[p - 1] = g.row(bits, p);
    return r;
  };
  const auto rows = rows_of(s);
  const auto cols = g.columns(s);

  std::uint64_t tried = 0;
  std::vector<State> sa(g.m, 1), ta;
  for (std::uint64_t rs = 0; rs < *count_m; ++rs) {
    // A_s: row p holds row s(p) of S.
    std::uint64_t a_s = 0;
    for (State p = 1; p <= g.m; ++p) a_s |= std::uint64_t{rows[sa[p - 1] - 1]} << ((p - 1) * g.n);
    ta.assign(g.n, 1);
    for (std::uint64_t rt = 0; rt < *count_n; ++rt) {
      if (options.letter_budget && tried++ >= options.letter_budget) return std::nullopt;
      // B_t: column q holds column t(q) of S.
      std::uint64_t t_max = a_s;
      for (State q = 1; q <= g.n; ++q) {
        const auto keep = cols[ta[q - 1] - 1];
        for (State p = 1; p <= g.m; ++p) {
          if (!((keep >> (p - 1)) & 1U)) t_max &= ~g.bit(p, q);
        }
      }
      if (g.valid(t_max) && step_bits(g, t_max, sa, ta) == s) {
        std::uint64_t t = t_max;
        for (std::uint64_t b = t_max; b && std::popcount(t) >= size; b &= b - 1) {
          const std::uint64_t trial = t & ~(b & -b);
          if (g.valid(trial) && step_bits(g, trial, sa, ta) == s) t = trial;
        }
        if (std::popcount(t) >= size) {
          for (std::uint64_t b = t; b; b &= b - 1) {
            const std::uint64_t trial = t & ~(b & -b);
            if (g.valid(trial) && step_bits(g, trial, sa, ta) == s) t = trial;
          }
        }
        if (std::popcount(t) < size && accept(t)) {
          return std::pair{t, ExtremalLetter{Transformation(std::vector<State>(sa)), Transformation(ta)}};
        }
      }
      // Next t in lexicographic order.
      for (std::size_t i = g.n; i-- > 0;) {
        if (ta[i] < g.n) {
          ++ta[i];
          break;
        }
        ta[i] = 1;
      }
    }
    for (std::size_t i = g.m; i-- > 0;) {
      if (sa[i] < g.m) {
        ++sa[i];
        break;
      }
      sa[i] = 1;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<ProductSubset, ExtremalLetter>> find_smaller_predecessor(const ProductSubset& s,
                                                                                 const PredecessorSearch& options) {
  const Grid g{s.rows(), s.columns()};
  auto found = search_predecessor(g, s.bits(), options, [](std::uint64_t) { return true; });
  if (!found) return std::nullopt;
  return std::pair{ProductSubset(g.m, g.n, found->first), std::move(found->second)};
}

DirectSmallerReport direct_smaller_check(std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw InputError("grid dimensions must be positive");
  if (m * n > 16) throw SizeError("direct_smaller_check needs m*n <= 16");
  const Grid g{m, n};
  DirectSmallerReport report{m, n, 0, {}};
  const std::uint64_t total = std::uint64_t{1} << (m * n);
  for (std::uint64_t s = 0; s < total; ++s) {
    if (std::popcount(s) < 3 || !g.valid(s)) continue;
    ++report.checked;
    if (!search_predecessor(g, s, {}, [](std::uint64_t) { return true; })) report.exceptions.push_back(s);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Orbits

OrbitCanon::OrbitCanon(std::size_t m, std::size_t n) : m_(m), n_(n) {
  if (m == 0 || n == 0) throw InputError("grid dimensions must be positive");
  if (m > 8 || m * n > 64) throw SizeError("OrbitCanon: grid too large");
  std::vector<std::uint8_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::uint8_t{0});
  do {
    row_perms_.push_back(perm);
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
}

namespace {

std::uint32_t permute_rows(std::uint32_t mask, const std::vector<std::uint8_t>& perm) {
  std::uint32_t out = 0;
  for (std::uint32_t b = mask; b; b &= b - 1) out |= std::uint32_t{1} << perm[std::countr_zero(b)];
  return out;
}

}  // namespace

std::uint64_t OrbitCanon::canonical(std::uint64_t bits) const {
  const Grid g{m_, n_};
  const auto cols = g.columns(bits);
  std::vector<std::uint32_t> best, trial(n_);
  for (const auto& perm : row_perms_) {
    for (std::size_t q = 0; q < n_; ++q) trial[q] = permute_rows(cols[q], perm);
    std::sort(trial.begin() + 1, trial.end());
    if (best.empty() || trial < best) best = trial;
  }
  return g.from_columns(best);
}

std::uint64_t OrbitCanon::orbit_size(std::uint64_t canonical_bits) const {
  const Grid g{m_, n_};
  const auto cols = g.columns(canonical_bits);
  std::uint64_t fixing = 0;
  std::vector<std::uint32_t> trial(n_);
  for (const auto& perm : row_perms_) {
    for (std::size_t q = 0; q < n_; ++q) trial[q] = permute_rows(cols[q], perm);
    std::sort(trial.begin() + 1, trial.end());
    if (trial == cols) ++fixing;
  }
  std::uint64_t column_symmetries = 1;
  for (std::size_t q = 1; q < n_;) {
    std::size_t r = q;
    while (r < n_ && cols[r] == cols[q]) ++r;
    column_symmetries *= factorial(r - q);
    q = r;
  }
  return factorial(m_ - 1) * factorial(n_ - 1) / (fixing * column_symmetries);
}

std::vector<std::uint64_t> OrbitCanon::representatives() const {
  const Grid g{m_, n_};
  const std::uint32_t limit = std::uint32_t{1} << m_;
  std::vector<std::uint64_t> out;
  std::vector<std::uint32_t> cols(n_, 0);
  // Column 1 nonempty, columns 2..n non-decreasing.
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t q, std::uint32_t low) {
    if (q == n_) {
      bool row1 = false;
      for (auto c : cols) row1 = row1 || (c & 1U);
      if (!row1) return;
      const auto bits = g.from_columns(cols);
      if (canonical(bits) == bits) out.push_back(bits);
      return;
    }
    for (std::uint32_t c = low; c < limit; ++c) {
      cols[q] = c;
      rec(q + 1, c);
    }
  };
  for (std::uint32_t c1 = 1; c1 < limit; ++c1) {
    cols[0] = c1;
    rec(1, 0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Certificates

std::string to_string(Justification j) {
  switch (j) {
    case Justification::Initial: return "INITIAL";
    case Justification::Shrink: return "SHRINK";
    case Justification::Containment: return "CONTAINMENT";
    case Justification::SingleElement: return "SINGLE-ELEMENT";
    case Justification::Permutation: return "PERMUTATION";
    case Justification::Base: return "BASE";
    case Justification::BfsEdge: return "BFS-EDGE";
  }
  return "?";
}

std::optional<Justification> justification_from_string(std::string_view s) {
  for (auto j : {Justification::Initial, Justification::Shrink, Justification::Containment,
                 Justification::SingleElement, Justification::Permutation, Justification::Base,
                 Justification::BfsEdge}) {
    if (to_string(j) == s) return j;
  }
  return std::nullopt;
}

namespace {

using Instance = std::pair<std::size_t, std::size_t>;

bool covered_by_base(const std::set<Instance>& base, std::size_t m, std::size_t n) {
  for (auto [bm, bn] : base) {
    if ((m <= bm && n <= bn) || (m <= bn && n <= bm)) return true;
  }
  return false;
}

std::vector<Transformation> permutations_of(std::size_t m) {
  std::vector<State> images(m);
  std::iota(images.begin(), images.end(), State{1});
  std::vector<Transformation> out;
  while (std::next_permutation(images.begin(), images.end())) out.emplace_back(images);
  return out;
}

}  // namespace

CertifyResult certify(std::size_t m, std::size_t n, const std::set<std::pair<std::size_t, std::size_t>>& base_facts,
                      const CertifyOptions& options) {
  if (m == 0 || n == 0) throw InputError("grid dimensions must be positive");
  if (m > 5) throw SizeError("certify: the permutation search is limited to m <= 5");
  for (auto [bm, bn] : base_facts) {
    if (bm == 0 || bn == 0) throw InputError("base facts need positive dimensions");
  }
  CertifyResult result;
  result.certificate.m = m;
  result.certificate.n = n;
  result.certificate.base_facts = base_facts;

  // justified[(m,n)] holds the canonical subsets that have a justification.
  std::map<Instance, std::unordered_set<std::uint64_t>> justified;
  std::map<Instance, OrbitCanon> canons;
  auto canon_of = [&](std::size_t a, std::size_t b) -> const OrbitCanon& {
    return canons.try_emplace({a, b}, a, b).first->second;
  };
  auto is_justified = [&](std::size_t a, std::size_t b, std::uint64_t bits) {
    const auto it = justified.find({a, b});
    return it != justified.end() && it->second.count(canon_of(a, b).canonical(bits));
  };

  for (std::size_t mi = 1; mi <= m; ++mi) {
    const auto perms = permutations_of(mi);
    for (std::size_t ni = 1; ni <= n; ++ni) {
      const Grid g{mi, ni};
      const auto& canon = canon_of(mi, ni);
      auto reps = canon.representatives();
      std::stable_sort(reps.begin(), reps.end(),
                       [](std::uint64_t a, std::uint64_t b) { return std::popcount(a) < std::popcount(b); });
      const bool base = covered_by_base(base_facts, mi, ni);
      auto& done = justified[{mi, ni}];
      InstanceCertificate inst{mi, ni, {}};

      for (const auto bits : reps) {
        const ProductSubset s(mi, ni, bits);
        CertificateEntry e;
        e.subset = bits;
        e.ref_m = mi;
        e.ref_n = ni;
        bool found = false;
        if (bits == 1) {
          e.kind = Justification::Initial;
          found = true;
        }
        if (!found && options.use_reductions) {
          if (auto r = reduce_shrink(s); r && is_justified(r->sub.rows(), r->sub.columns(), r->sub.bits())) {
            e.kind = Justification::Shrink;
            e.ref_m = r->sub.rows();
            e.ref_n = r->sub.columns();
            e.ref_subset = r->sub.bits();
            e.row = r->deleted_row;
            e.column = r->deleted_column;
            found = true;
          }
        }
        if (!found && options.use_reductions) {
          if (auto r = reduce_containment(s); r && is_justified(mi, ni, r->predecessor.bits())) {
            e.kind = Justification::Containment;
            e.ref_subset = r->predecessor.bits();
            e.letter = r->letter;
            e.axis = r->axis == ContainmentReduction::Axis::Row ? "row" : "column";
            e.row = r->from;
            e.column = r->to;
            found = true;
          }
        }
        if (!found && options.use_reductions) {
          if (auto r = reduce_single_element(s); r && is_justified(mi - 1, ni - 1, r->sub.bits())) {
            e.kind = Justification::SingleElement;
            e.ref_m = mi - 1;
            e.ref_n = ni - 1;
            e.ref_subset = r->sub.bits();
            e.letter = r->anchor;
            e.anchor_power = r->anchor_power;
            e.row = r->p;
            e.column = r->q;
            found = true;
          }
        }
        if (!found && options.use_reductions) {
          for (const auto& phi : perms) {
            auto r = reduce_permutation(s, phi);
            if (r && is_justified(mi, ni, r->predecessor.bits())) {
              e.kind = Justification::Permutation;
              e.ref_subset = r->predecessor.bits();
              e.letter = r->letter();
              e.removed_column = r->removed_column;
              found = true;
              break;
            }
          }
        }
        if (!found && base) {
          e.kind = Justification::Base;
          found = true;
        }
        if (!found && options.predecessor_search) {
          auto r = search_predecessor(g, bits, options.search,
                                      [&](std::uint64_t t) { return done.count(canon.canonical(t)) > 0; });
          if (r) {
            e.kind = Justification::BfsEdge;
            e.ref_subset = r->first;
            e.letter = std::move(r->second);
            found = true;
          }
        }
        if (!found) {
          result.gaps.push_back({mi, ni, bits});
          continue;
        }
        ++result.counts[e.kind];
        done.insert(bits);
        inst.entries.push_back(std::move(e));
      }
      std::sort(inst.entries.begin(), inst.entries.end(),
                [](const CertificateEntry& a, const CertificateEntry& b) { return a.subset < b.subset; });
      result.certificate.instances[{mi, ni}] = std::move(inst);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

VerifyResult verify_certificate(const Certificate& c) {
  VerifyResult out;
  auto fail = [&](const std::string& msg) {
    out.ok = false;
    out.problems.push_back(msg);
  };
  auto where = [](std::size_t m, std::size_t n, std::uint64_t s) {
    return "instance " + std::to_string(m) + "x" + std::to_string(n) + ", subset " + std::to_string(s);
  };

  for (std::size_t a = 1; a <= c.m; ++a) {
    for (std::size_t b = 1; b <= c.n; ++b) {
      if (!c.instances.count({a, b})) fail("missing instance " + std::to_string(a) + "x" + std::to_string(b));
    }
  }

  std::map<Instance, OrbitCanon> canons;
  std::map<Instance, std::unordered_set<std::uint64_t>> present;
  for (const auto& [key, inst] : c.instances) {
    if (key.first != inst.m || key.second != inst.n || inst.m == 0 || inst.n == 0 || inst.m > 8 ||
        inst.m * inst.n > 64) {
      fail("malformed instance key");
      continue;
    }
    canons.try_emplace(key, inst.m, inst.n);
    auto& set = present[key];
    for (const auto& e : inst.entries) set.insert(e.subset);
  }

  for (const auto& [key, inst] : c.instances) {
    if (!canons.count(key)) continue;
    const auto& canon = canons.at(key);
    const Grid g{inst.m, inst.n};
    BigInt covered = 0;
    std::unordered_set<std::uint64_t> seen;
    for (const auto& e : inst.entries) {
      const auto here = where(inst.m, inst.n, e.subset);
      if (inst.m * inst.n < 64 && (e.subset >> (inst.m * inst.n))) {
        fail(here + ": encoding outside the grid");
        continue;
      }
      if (!g.valid(e.subset)) fail(here + ": not a valid subset");
      if (canon.canonical(e.subset) != e.subset) fail(here + ": not an orbit representative");
      if (!seen.insert(e.subset).second) fail(here + ": listed twice");
      covered += canon.orbit_size(e.subset);

      const auto size = std::popcount(e.subset);
      // Reference must be justified in its own instance and strictly smaller.
      auto check_ref = [&](std::size_t rm, std::size_t rn, std::uint64_t ref) {
        const auto it = canons.find({rm, rn});
        if (it == canons.end()) {
          fail(here + ": reference instance missing");
          return;
        }
        if (rm * rn < 64 && (ref >> (rm * rn))) {
          fail(here + ": reference outside its grid");
          return;
        }
        if (!present.at({rm, rn}).count(it->second.canonical(ref))) fail(here + ": reference is not certified");
        const bool same = rm == inst.m && rn == inst.n;
        if (same && std::popcount(ref) >= size) fail(here + ": reference is not smaller");
        if (!same && (rm > inst.m || rn > inst.n)) fail(here + ": reference instance is not smaller");
      };
      auto replay = [&](const std::string& what) {
        if (!e.letter || e.letter->s.size() != inst.m || e.letter->t.size() != inst.n) {
          fail(here + ": " + what + " needs a letter for this grid");
          return false;
        }
        if (!g.valid(e.ref_subset)) fail(here + ": predecessor is not valid");
        if (e.ref_m != inst.m || e.ref_n != inst.n) fail(here + ": predecessor in another instance");
        if (step_bits(g, e.ref_subset, e.letter->s.images(), e.letter->t.images()) != e.subset) {
          fail(here + ": " + what + " step does not replay");
          return false;
        }
        check_ref(inst.m, inst.n, e.ref_subset);
        return true;
      };

      try {
        switch (e.kind) {
          case Justification::Initial:
            if (e.subset != 1) fail(here + ": INITIAL must be {(1,1)}");
            break;
          case Justification::Base:
            if (!covered_by_base(c.base_facts, inst.m, inst.n)) fail(here + ": no base fact covers the instance");
            break;
          case Justification::Containment:
            if (replay("CONTAINMENT")) {
              const bool row = e.axis == "row";
              if (!row && e.axis != "column") fail(here + ": bad containment axis");
              const auto expected = row ? ExtremalLetter{Transformation::mapping(inst.m, e.row, e.column),
                                                         Transformation::identity(inst.n)}
                                        : ExtremalLetter{Transformation::identity(inst.m),
                                                         Transformation::mapping(inst.n, e.row, e.column)};
              if (*e.letter != expected) fail(here + ": containment letter does not match its indices");
            }
            break;
          case Justification::Permutation:
            if (replay("PERMUTATION")) {
              if (!e.letter->s.is_permutation() || !e.letter->t.is_permutation()) {
                fail(here + ": PERMUTATION letter is not a pair of permutations");
              }
              if (e.removed_column < 1 || e.removed_column > inst.n ||
                  g.column(e.ref_subset, e.removed_column) != 0) {
                fail(here + ": removed column is not empty in the predecessor");
              }
            }
            break;
          case Justification::BfsEdge:
            replay("BFS-EDGE");
            break;
          case Justification::Shrink: {
            const bool by_row = e.row != 0;
            if (by_row == (e.column != 0)) {
              fail(here + ": SHRINK deletes exactly one row or one column");
              break;
            }
            const State line = by_row ? e.row : e.column;
            if (line < 2 || line > (by_row ? inst.m : inst.n)) {
              fail(here + ": deleted line out of range");
              break;
            }
            const ProductSubset s(inst.m, inst.n, e.subset);
            if ((by_row ? s.row_mask(line) : s.column_mask(line)) != 0) {
              fail(here + ": deleted line is not empty");
              break;
            }
            const auto sub = delete_line(s, e.row, e.column);
            if (e.ref_m != sub.rows() || e.ref_n != sub.columns() || e.ref_subset != sub.bits()) {
              fail(here + ": SHRINK reference does not match the deletion");
              break;
            }
            check_ref(e.ref_m, e.ref_n, e.ref_subset);
            break;
          }
          case Justification::SingleElement: {
            if (inst.m < 2 || inst.n < 2 || e.ref_m != inst.m - 1 || e.ref_n != inst.n - 1) {
              fail(here + ": SINGLE-ELEMENT needs the (m-1)x(n-1) sub-instance");
              break;
            }
            if (e.row < 1 || e.row > inst.m || e.column < 1 || e.column > inst.n || !e.letter ||
                e.letter->s.size() != inst.m || e.letter->t.size() != inst.n || e.anchor_power == 0 ||
                e.anchor_power > 4) {
              fail(here + ": malformed SINGLE-ELEMENT entry");
              break;
            }
            const ProductSubset sub(e.ref_m, e.ref_n, e.ref_subset);
            if (!is_valid(sub)) fail(here + ": sub-instance subset is not valid");
            const auto rebuilt = embed_sub_instance(sub, inst.m, inst.n, e.row, e.column);
            if (rebuilt.bits() != e.subset) fail(here + ": sub-instance does not embed back to the subset");
            const ProductSubset s(inst.m, inst.n, e.subset);
            if (std::popcount(s.row_mask(e.row)) != 1 || std::popcount(s.column_mask(e.column)) != 1) {
              fail(here + ": cell is not isolated in its row and column");
            }
            std::uint64_t anchor = 1;
            for (std::size_t k = 0; k < e.anchor_power; ++k) {
              anchor = step_bits(g, anchor, e.letter->s.images(), e.letter->t.images());
            }
            if (anchor != single_element_anchor(inst.m, inst.n, e.row, e.column).bits()) {
              fail(here + ": anchor word does not reach the anchor pair");
            }
            check_ref(e.ref_m, e.ref_n, e.ref_subset);
            break;
          }
        }
      } catch (const std::exception& ex) {
        fail(here + ": " + ex.what());
      }
    }
    if (covered != bound_f(inst.m, inst.n)) {
      fail("instance " + std::to_string(inst.m) + "x" + std::to_string(inst.n) + ": orbits cover " +
           covered.str() + " subsets, expected " + bound_f(inst.m, inst.n).str());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json j;
  j["m"] = c.m;
  j["n"] = c.n;
  j["base_facts"] = nlohmann::json::array();
  for (auto [a, b] : c.base_facts) j["base_facts"].push_back({a, b});
  j["instances"] = nlohmann::json::array();
  for (const auto& [key, inst] : c.instances) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : inst.entries) {
      nlohmann::json x = {{"subset", e.subset}, {"kind", to_string(e.kind)}};
      if (e.kind != Justification::Initial && e.kind != Justification::Base) {
        x["ref"] = {{"m", e.ref_m}, {"n", e.ref_n}, {"subset", e.ref_subset}};
      }
      if (e.letter) x["letter"] = letters_to_json({*e.letter})[0];
      switch (e.kind) {
        case Justification::Shrink:
          x["deleted_row"] = e.row;
          x["deleted_column"] = e.column;
          break;
        case Justification::Containment:
          x["axis"] = e.axis;
          x["from"] = e.row;
          x["to"] = e.column;
          break;
        case Justification::SingleElement:
          x["p"] = e.row;
          x["q"] = e.column;
          x["anchor_power"] = e.anchor_power;
          break;
        case Justification::Permutation:
          x["removed_column"] = e.removed_column;
          break;
        default:
          break;
      }
      entries.push_back(std::move(x));
    }
    j["instances"].push_back({{"m", inst.m}, {"n", inst.n}, {"entries", std::move(entries)}});
  }
  return j;
}

Certificate certificate_from_json(const nlohmann::json& j) {
  try {
    Certificate c;
    c.m = j.at("m").get<std::size_t>();
    c.n = j.at("n").get<std::size_t>();
    for (const auto& b : j.at("base_facts")) c.base_facts.insert({b.at(0).get<std::size_t>(), b.at(1).get<std::size_t>()});
    for (const auto& ij : j.at("instances")) {
      InstanceCertificate inst;
      inst.m = ij.at("m").get<std::size_t>();
      inst.n = ij.at("n").get<std::size_t>();
      for (const auto& x : ij.at("entries")) {
        CertificateEntry e;
        e.subset = x.at("subset").get<std::uint64_t>();
        const auto kind = justification_from_string(x.at("kind").get<std::string>());
        if (!kind) throw InputError("certificate: unknown justification '" + x.at("kind").get<std::string>() + "'");
        e.kind = *kind;
        e.ref_m = inst.m;
        e.ref_n = inst.n;
        if (x.contains("ref")) {
          e.ref_m = x["ref"].at("m").get<std::size_t>();
          e.ref_n = x["ref"].at("n").get<std::size_t>();
          e.ref_subset = x["ref"].at("subset").get<std::uint64_t>();
        }
        if (x.contains("letter")) {
          e.letter = letters_from_json(nlohmann::json::array({x["letter"]}), inst.m, inst.n, "certificate")[0];
        }
        e.row = x.value("deleted_row", x.value("from", x.value("p", State{0})));
        e.column = x.value("deleted_column", x.value("to", x.value("q", State{0})));
        e.axis = x.value("axis", std::string());
        e.anchor_power = x.value("anchor_power", std::size_t{0});
        e.removed_column = x.value("removed_column", State{0});
        inst.entries.push_back(std::move(e));
      }
      c.instances[{inst.m, inst.n}] = std::move(inst);
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("certificate: ") + e.what());
  }
}

nlohmann::json to_json(const CertifyResult& r, bool include_certificate) {
  nlohmann::json j;
  j["m"] = r.certificate.m;
  j["n"] = r.certificate.n;
  j["ok"] = r.ok();
  j["base_facts"] = nlohmann::json::array();
  for (auto [a, b] : r.certificate.base_facts) j["base_facts"].push_back({a, b});
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [kind, count] : r.counts) counts[to_string(kind)] = count;
  j["counts"] = counts;
  j["gaps"] = nlohmann::json::array();
  for (const auto& g : r.gaps) j["gaps"].push_back({{"m", g.m}, {"n", g.n}, {"subset", g.subset}});
  if (include_certificate) j["certificate"] = to_json(r.certificate);
  return j;
}

}  // namespace ssc
