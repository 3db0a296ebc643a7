#include "ssc/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "detail/step_kernel.hpp"
#include "ssc/error.hpp"
#include "ssc/reach.hpp"

namespace ssc {

namespace {

constexpr std::size_t kMaxCells = 12;
constexpr std::uint64_t kMaxStepTable = std::uint64_t{1} << 26;

using Letters = std::vector<std::uint32_t>;  // sorted letter indices

BigInt multichoose(const BigInt& items, std::size_t k) {
  if (items <= 0) return k == 0 ? 1 : 0;
  BigInt r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (items + i - 1) / i;
  return r;
}

BigInt binomial(std::size_t n, std::size_t k) {
  BigInt r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Permutations of 1..k fixing 1, as image vectors.
std::vector<std::vector<State>> relabelings(std::size_t k) {
  std::vector<State> images(k);
  std::iota(images.begin(), images.end(), State{1});
  std::vector<std::vector<State>> out;
  do {
    out.push_back(images);
  } while (std::next_permutation(images.begin() + 1, images.end()));
  return out;
}

std::uint32_t map_mask(std::uint32_t mask, const std::vector<State>& images) {
  std::uint32_t out = 0;
  for (std::uint32_t b = mask; b; b &= b - 1) out |= std::uint32_t{1} << (images[std::countr_zero(b)] - 1);
  return out;
}

/// Letters of T_m x T_n with their step tables and relabeling action.
class Space {
 public:
  Space(std::size_t m, std::size_t n) : m_(m), n_(n), grid_(m, n) {
    const auto count_m = *transformation_count(m);
    const auto count_n = *transformation_count(n);
    for (std::uint64_t r = 0; r < count_m; ++r) left_.push_back(transformation_at(m, r));
    for (std::uint64_t r = 0; r < count_n; ++r) right_.push_back(transformation_at(n, r));
    letters_ = count_m * count_n;
    subsets_ = std::size_t{1} << (m * n);
    if (static_cast<std::uint64_t>(letters_) * subsets_ > kMaxStepTable) {
      throw SizeError("search: step table for " + std::to_string(m) + "x" + std::to_string(n) + " is too large");
    }
    detail::ImageTables lt(m), rt(n);
    for (const auto& t : left_) lt.add(t);
    for (const auto& t : right_) rt.add(t);
    step_.resize(letters_ * subsets_);
    for (std::size_t x = 0; x < letters_; ++x) {
      const auto* s_tab = lt.table(x / right_.size());
      const auto* t_tab = rt.table(x % right_.size());
      for (std::size_t s = 0; s < subsets_; ++s) {
        step_[x * subsets_ + s] = static_cast<std::uint16_t>(grid_.step(s, s_tab, t_tab));
      }
    }
    cls_.resize(letters_);
    for (std::size_t x = 0; x < letters_; ++x) {
      cls_[x] = static_cast<std::uint8_t>((s_of(x)(1) - 1) * n + (t_of(x)(1) - 1));
    }
    rows_ = relabelings(m);
    cols_ = relabelings(n);
    for (const auto& pi : rows_) {
      for (const auto& sigma : cols_) {
        std::vector<std::uint32_t> map(letters_);
        for (std::size_t x = 0; x < letters_; ++x) {
          map[x] = static_cast<std::uint32_t>(transformation_rank(conjugate(s_of(x), pi)) * right_.size() +
                                              transformation_rank(conjugate(t_of(x), sigma)));
        }
        group_.push_back({pi, sigma, std::move(map)});
      }
    }
  }

  struct Element {
    std::vector<State> pi;
    std::vector<State> sigma;
    std::vector<std::uint32_t> letter_map;
  };

  std::size_t rows() const { return m_; }
  std::size_t columns() const { return n_; }
  std::size_t letters() const { return letters_; }
  std::size_t subsets() const { return subsets_; }
  const Transformation& s_of(std::size_t x) const { return left_[x / right_.size()]; }
  const Transformation& t_of(std::size_t x) const { return right_[x % right_.size()]; }
  std::uint32_t letter_of(const Transformation& s, const Transformation& t) const {
    return static_cast<std::uint32_t>(transformation_rank(s) * right_.size() + transformation_rank(t));
  }
  std::uint16_t step(std::size_t x, std::size_t s) const { return step_[x * subsets_ + s]; }
  std::uint8_t letter_class(std::size_t x) const { return cls_[x]; }
  const std::vector<Element>& group() const { return group_; }  // first element is the identity
  const detail::GridKernel& grid() const { return grid_; }

  /// Cells of F_K x F_L.
  std::uint64_t final_cells(std::uint32_t fk, std::uint32_t fl) const {
    std::uint64_t out = 0;
    for (std::size_t p = 0; p < m_; ++p) {
      if ((fk >> p) & 1U) out |= std::uint64_t{fl} << (p * n_);
    }
    return out;
  }

 private:
  static Transformation conjugate(const Transformation& t, const std::vector<State>& pi) {
    std::vector<State> images(t.size());
    for (State q = 1; q <= t.size(); ++q) images[pi[q - 1] - 1] = pi[t(q) - 1];
    return Transformation(std::move(images));
  }

  std::size_t m_;
  std::size_t n_;
  detail::GridKernel grid_;
  std::vector<Transformation> left_;
  std::vector<Transformation> right_;
  std::size_t letters_ = 0;
  std::size_t subsets_ = 0;
  std::vector<std::uint16_t> step_;
  std::vector<std::uint8_t> cls_;
  std::vector<std::vector<State>> rows_;
  std::vector<std::vector<State>> cols_;
  std::vector<Element> group_;
};

/// Number of Moore classes of a complete DFA given as a flat transition table.
std::size_t moore_classes(std::size_t states, std::size_t k, const std::vector<std::uint32_t>& trans,
                          const std::vector<std::uint8_t>& final_flag) {
  std::vector<std::uint32_t> cls(states), next(states), order(states);
  for (std::size_t i = 0; i < states; ++i) cls[i] = final_flag[i];
  std::size_t classes = 0;
  {
    bool any_final = false, any_other = false;
    for (auto f : final_flag) (f ? any_final : any_other) = true;
    classes = static_cast<std::size_t>(any_final) + static_cast<std::size_t>(any_other);
  }
  std::iota(order.begin(), order.end(), 0U);
  for (;;) {
    auto less = [&](std::uint32_t a, std::uint32_t b) {
      if (cls[a] != cls[b]) return cls[a] < cls[b];
      for (std::size_t x = 0; x < k; ++x) {
        const auto ca = cls[trans[a * k + x]], cb = cls[trans[b * k + x]];
        if (ca != cb) return ca < cb;
      }
      return false;
    };
    std::sort(order.begin(), order.end(), less);
    std::uint32_t id = 0;
    for (std::size_t i = 0; i < states; ++i) {
      if (i > 0 && less(order[i - 1], order[i])) ++id;
      next[order[i]] = id;
    }
    const std::size_t refined = states ? id + 1 : 0;
    cls.swap(next);
    if (refined == classes) return refined;
    classes = refined;
  }
}

/// Minimal-DFA size of the k-letter DFA on `states` states given by images.
std::size_t small_dfa_complexity(std::size_t states, const std::vector<const Transformation*>& letters,
                                 std::uint32_t finals) {
  const std::size_t k = letters.size();
  std::vector<char> seen(states + 1, 0);
  std::vector<State> stack{1};
  seen[1] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const State q = stack.back();
    stack.pop_back();
    for (const auto* t : letters) {
      const State r = (*t)(q);
      if (!seen[r]) {
        seen[r] = 1;
        ++reached;
        stack.push_back(r);
      }
    }
  }
  if (reached < states) return reached;  // the minimal DFA is smaller still
  std::vector<std::uint32_t> trans(states * k);
  std::vector<std::uint8_t> flag(states);
  for (State q = 1; q <= states; ++q) {
    flag[q - 1] = (finals >> (q - 1)) & 1U;
    for (std::size_t x = 0; x < k; ++x) trans[(q - 1) * k + x] = (*letters[x])(q) - 1;
  }
  return moore_classes(states, k, trans, flag);
}

struct Triple {
  Letters letters;
  std::uint32_t fk;
  std::uint32_t fl;
};

std::vector<std::uint32_t> triple_key(const Space& sp, const Triple& t) {
  std::vector<std::uint32_t> best;
  auto consider = [&](const Letters& letters, std::uint32_t fk, std::uint32_t fl) {
    for (const auto& g : sp.group()) {
      std::vector<std::uint32_t> key;
      key.reserve(letters.size() + 2);
      for (auto x : letters) key.push_back(g.letter_map[x]);
      std::sort(key.begin(), key.end());
      key.push_back(map_mask(fk, g.pi));
      key.push_back(map_mask(fl, g.sigma));
      if (best.empty() || key < best) best = std::move(key);
    }
  };
  consider(t.letters, t.fk, t.fl);
  if (sp.rows() == sp.columns()) {
    Letters swapped;
    for (auto x : t.letters) swapped.push_back(sp.letter_of(sp.t_of(x), sp.s_of(x)));
    std::sort(swapped.begin(), swapped.end());
    consider(swapped, t.fl, t.fk);
  }
  return best;
}

std::vector<std::string> letter_names(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back(k <= 26 ? std::string(1, static_cast<char>('a' + i)) : "x" + std::to_string(i + 1));
  }
  return out;
}

std::vector<State> mask_states(std::uint32_t mask) {
  std::vector<State> out;
  for (std::uint32_t b = mask; b; b &= b - 1) out.push_back(static_cast<State>(std::countr_zero(b) + 1));
  return out;
}

WitnessPair pair_from_key(const Space& sp, const std::vector<std::uint32_t>& key) {
  const std::size_t k = key.size() - 2;
  std::vector<Transformation> ks, ls;
  for (std::size_t i = 0; i < k; ++i) {
    ks.push_back(sp.s_of(key[i]));
    ls.push_back(sp.t_of(key[i]));
  }
  const auto names = letter_names(k);
  return {Dfa(sp.rows(), names, std::move(ks), mask_states(key[k])),
          Dfa(sp.columns(), names, std::move(ls), mask_states(key[k + 1]))};
}

/// Canonical key of the letters alone, final states dropped.
std::vector<std::uint32_t> structure_key(const Space& sp, const std::vector<std::uint32_t>& key) {
  const Triple t{Letters(key.begin(), key.end() - 2), 0, 0};
  auto out = triple_key(sp, t);
  out.resize(out.size() - 2);
  return out;
}

struct Found {
  std::size_t best = 0;
  std::set<std::vector<std::uint32_t>> keys;  // with final states
  std::set<std::vector<std::uint32_t>> right_keys;  // L alone, bound mode
  std::set<std::vector<std::uint32_t>> right_keys_no_finals;
  std::uint64_t candidates = 0;
};

std::vector<std::uint32_t> right_key(const Space& sp, const Letters& letters, std::optional<std::uint32_t> fl) {
  std::vector<std::uint32_t> best;
  std::set<std::vector<State>> seen;
  for (const auto& g : sp.group()) {
    if (!seen.insert(g.sigma).second) continue;
    std::vector<std::uint32_t> key;
    for (auto x : letters) key.push_back(static_cast<std::uint32_t>(transformation_rank(sp.t_of(g.letter_map[x]))));
    std::sort(key.begin(), key.end());
    if (fl) key.push_back(map_mask(*fl, g.sigma));
    if (best.empty() || key < best) best = std::move(key);
  }
  return best;
}

class Searcher {
 public:
  Searcher(const Space& sp, std::size_t k, bool bound_only)
      : sp_(sp), k_(k), bound_only_(bound_only), bound_(static_cast<std::uint64_t>(bound_f(sp.rows(), sp.columns()))) {
    required_ = ((std::uint32_t{1} << (sp.rows() * sp.columns())) - 1) & ~std::uint32_t{1};
    stamp_.assign(sp.subsets(), 0);
  }

  /// All multisets whose first letter is `first`.
  void run_first(std::uint32_t first, Found& found) {
    letters_.assign(1, first);
    dfs(first, std::uint32_t{1} << sp_.letter_class(first), found);
  }

 private:
  void dfs(std::uint32_t low, std::uint32_t covered, Found& found) {
    if (bound_only_ && static_cast<std::size_t>(std::popcount(required_ & ~covered)) > k_ - letters_.size()) return;
    if (letters_.size() == k_) {
      evaluate(found);
      return;
    }
    for (std::uint32_t x = low; x < sp_.letters(); ++x) {
      letters_.push_back(x);
      dfs(x, covered | (std::uint32_t{1} << sp_.letter_class(x)), found);
      letters_.pop_back();
    }
  }

  void evaluate(Found& found) {
    // Only multisets least under relabeling of states 2.. are examined.
    stabilizer_.clear();
    Letters image(k_);
    for (std::size_t gi = 0; gi < sp_.group().size(); ++gi) {
      const auto& g = sp_.group()[gi];
      for (std::size_t i = 0; i < k_; ++i) image[i] = g.letter_map[letters_[i]];
      std::sort(image.begin(), image.end());
      if (image < letters_) return;
      if (image == letters_) stabilizer_.push_back(gi);
    }
    ++found.candidates;

    std::vector<const Transformation*> ks(k_), ls(k_);
    for (std::size_t i = 0; i < k_; ++i) {
      ks[i] = &sp_.s_of(letters_[i]);
      ls[i] = &sp_.t_of(letters_[i]);
    }
    const std::size_t m = sp_.rows(), n = sp_.columns();
    if (!all_reach(m, ks) || !all_reach(n, ls)) return;

    // Reachable subsets.
    ++epoch_;
    reached_.assign(1, 1);
    stamp_[1] = epoch_;
    for (std::size_t i = 0; i < reached_.size(); ++i) {
      const auto s = reached_[i];
      for (auto x : letters_) {
        const auto t = sp_.step(x, s);
        if (stamp_[t] != epoch_) {
          stamp_[t] = epoch_;
          reached_.push_back(t);
        }
      }
    }
    const std::size_t r = reached_.size();
    if (bound_only_ ? r != bound_ : r < found.best) return;

    index_.resize(sp_.subsets());
    for (std::size_t i = 0; i < r; ++i) index_[reached_[i]] = static_cast<std::uint32_t>(i);
    trans_.resize(r * k_);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < k_; ++j) trans_[i * k_ + j] = index_[sp_.step(letters_[j], reached_[i])];
    }

    const std::uint32_t full_m = (std::uint32_t{1} << m) - 1, full_n = (std::uint32_t{1} << n) - 1;
    std::vector<std::uint32_t> left_ok, right_ok;
    for (std::uint32_t f = 1; f < full_m; ++f) {
      if (small_dfa_complexity(m, ks, f) == m) left_ok.push_back(f);
    }
    for (std::uint32_t f = 1; f < full_n; ++f) {
      if (small_dfa_complexity(n, ls, f) == n) right_ok.push_back(f);
    }
    flags_.resize(r);
    for (auto fk : left_ok) {
      for (auto fl : right_ok) {
        if (!finals_canonical(fk, fl)) continue;
        const auto cells = sp_.final_cells(fk, fl);
        for (std::size_t i = 0; i < r; ++i) flags_[i] = (reached_[i] & cells) ? 1 : 0;
        const auto kappa = moore_classes(r, k_, trans_, flags_);
        if (kappa < found.best || (bound_only_ && kappa != bound_)) continue;
        if (kappa > found.best) {
          found.best = kappa;
          found.keys.clear();
          found.right_keys.clear();
          found.right_keys_no_finals.clear();
        }
        const Triple t{letters_, fk, fl};
        const auto key = triple_key(sp_, t);
        found.keys.insert(key);
        if (bound_only_) {
          // Right operands are read off the canonical orientation of the pair.
          const Letters oriented(key.begin(), key.end() - 2);
          found.right_keys.insert(right_key(sp_, oriented, key.back()));
          const auto shape = structure_key(sp_, key);
          found.right_keys_no_finals.insert(right_key(sp_, Letters(shape.begin(), shape.end()), std::nullopt));
        }
      }
    }
  }

  static bool all_reach(std::size_t states, const std::vector<const Transformation*>& letters) {
    std::uint32_t seen = 1;
    for (bool grew = true; grew;) {
      grew = false;
      for (std::uint32_t b = seen; b; b &= b - 1) {
        const State q = static_cast<State>(std::countr_zero(b) + 1);
        for (const auto* t : letters) {
          const std::uint32_t bit = std::uint32_t{1} << ((*t)(q) - 1);
          if (!(seen & bit)) {
            seen |= bit;
            grew = true;
          }
        }
      }
    }
    return std::popcount(seen) == static_cast<int>(states);
  }

  bool finals_canonical(std::uint32_t fk, std::uint32_t fl) const {
    for (auto gi : stabilizer_) {
      const auto& g = sp_.group()[gi];
      const auto a = map_mask(fk, g.pi), b = map_mask(fl, g.sigma);
      if (std::pair{a, b} < std::pair{fk, fl}) return false;
    }
    return true;
  }

  const Space& sp_;
  std::size_t k_;
  bool bound_only_;
  std::uint64_t bound_;
  std::uint32_t required_ = 0;
  Letters letters_;
  std::vector<std::size_t> stabilizer_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<std::uint64_t> reached_;
  std::vector<std::uint32_t> index_;
  std::vector<std::uint32_t> trans_;
  std::vector<std::uint8_t> flags_;
};

void check_args(std::size_t m, std::size_t n, std::size_t k) {
  if (m < 1 || n < 1) throw InputError("search needs m, n >= 1");
  if (k < 1) throw InputError("search needs at least one letter");
  if (m * n > kMaxCells) throw SizeError("search: m*n = " + std::to_string(m * n) + " exceeds 12");
  if (k > 8) throw SizeError("search: alphabets larger than 8 letters are out of range");
}

Found run_search(std::size_t m, std::size_t n, std::size_t k, const SearchOptions& options) {
  check_args(m, n, k);
  const auto volume = search_volume(m, n, k, options.bound_only);
  if (volume > BigInt(options.volume_guard)) {
    throw SizeError("search volume for (" + std::to_string(m) + "," + std::to_string(n) + "," + std::to_string(k) +
                    ") is about " + volume.str() + " candidates, above the guard of " +
                    BigInt(options.volume_guard).str());
  }
  const Space sp(m, n);
  const unsigned workers = std::max(1U, options.workers);
  std::vector<Found> parts(workers);
  std::atomic<std::uint32_t> next{0};
  auto work = [&](unsigned w) {
    Searcher searcher(sp, k, options.bound_only);
    for (;;) {
      const auto first = next.fetch_add(1);
      if (first >= sp.letters()) break;
      searcher.run_first(first, parts[w]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  Found merged;
  for (auto& p : parts) {
    merged.candidates += p.candidates;
    if (p.best > merged.best) {
      merged.best = p.best;
      merged.keys.clear();
      merged.right_keys.clear();
      merged.right_keys_no_finals.clear();
    }
    if (p.best == merged.best) {
      merged.keys.insert(p.keys.begin(), p.keys.end());
      merged.right_keys.insert(p.right_keys.begin(), p.right_keys.end());
      merged.right_keys_no_finals.insert(p.right_keys_no_finals.begin(), p.right_keys_no_finals.end());
    }
  }
  return merged;
}

}  // namespace

BigInt search_volume(std::size_t m, std::size_t n, std::size_t k, bool bound_only) {
  check_args(m, n, k);
  const BigInt letters = BigInt(*transformation_count(m)) * BigInt(*transformation_count(n));
  if (!bound_only) {
    return multichoose(letters, k) * ((BigInt(1) << m) - 2) * ((BigInt(1) << n) - 2);
  }
  // Multisets meeting all mn-1 classes (s(1), t(1)) != (1,1), by inclusion-exclusion.
  const std::size_t classes = m * n - 1;
  const BigInt class_size = letters / (m * n);
  BigInt total = 0;
  for (std::size_t j = 0; j <= classes; ++j) {
    const BigInt term = binomial(classes, j) * multichoose(letters - class_size * j, k);
    total += (j % 2 == 0) ? term : BigInt(-term);
  }
  return total;
}

SearchResult max_shuffle_complexity(std::size_t m, std::size_t n, std::size_t k, const SearchOptions& options) {
  const auto found = run_search(m, n, k, options);
  const Space sp(m, n);
  SearchResult r;
  r.m = m;
  r.n = n;
  r.k = k;
  r.bound_only = options.bound_only;
  r.bound = static_cast<std::uint64_t>(bound_f(m, n));
  r.max = found.best;
  r.met = found.best == r.bound;
  r.candidates_evaluated = found.candidates;
  r.distinguish_finals = options.distinguish_finals;
  r.witness_pairs = found.keys.size();
  // Class key -> least full key in the class.
  std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> classes;
  for (const auto& key : found.keys) {
    auto class_key = key;
    if (!options.distinguish_finals) class_key = structure_key(sp, key);
    classes.try_emplace(std::move(class_key), key);
  }
  r.witness_count = classes.size();
  for (const auto& [class_key, key] : classes) {
    r.witness_keys.push_back(class_key);
    if (r.witnesses.size() < options.result_cap) {
      auto pair = pair_from_key(sp, key);
      if (shuffle_state_complexity(pair.left, pair.right) != r.max) {
        throw InvariantError("search witness does not reproduce the reported maximum");
      }
      r.witnesses.push_back(std::move(pair));
    }
  }
  return r;
}

std::optional<std::size_t> min_witness_alphabet(std::size_t m, std::size_t n, std::size_t k_min, std::size_t k_max,
                                                const SearchOptions& options) {
  if (k_min < 1 || k_min > k_max) throw InputError("min_witness_alphabet needs 1 <= k_min <= k_max");
  auto bound_options = options;
  bound_options.bound_only = true;
  bound_options.result_cap = 0;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    if (run_search(m, n, k, bound_options).best > 0) return k;
  }
  return std::nullopt;
}

std::uint64_t count_nonisomorphic_witness_right_dfas(std::size_t m, std::size_t n, std::size_t k, bool ignore_finals,
                                                     const SearchOptions& options) {
  auto bound_options = options;
  bound_options.bound_only = true;
  const auto found = run_search(m, n, k, bound_options);
  if (found.best == 0) return 0;
  return ignore_finals ? found.right_keys_no_finals.size() : found.right_keys.size();
}

namespace {

/// The letters of a DFA pair as indices into T_m x T_n with initial state 1.
Triple triple_of(const Space& sp, const Dfa& left, const Dfa& right) {
  auto normalised = [](const Dfa& d) {
    if (d.initial() == 1) return d;
    const auto swap = Transformation::transposition(d.state_count(), 1, d.initial());
    std::vector<Transformation> delta;
    for (const auto& t : d.delta()) {
      std::vector<State> images(d.state_count());
      for (State q = 1; q <= d.state_count(); ++q) images[swap(q) - 1] = swap(t(q));
      delta.emplace_back(std::move(images));
    }
    std::vector<State> finals;
    for (State f : d.finals()) finals.push_back(swap(f));
    return Dfa(d.state_count(), d.alphabet(), std::move(delta), std::move(finals));
  };
  const Dfa l = normalised(left), r = normalised(right);
  Triple t;
  for (std::size_t x = 0; x < l.letter_count(); ++x) t.letters.push_back(sp.letter_of(l.action(x), r.action(x)));
  std::sort(t.letters.begin(), t.letters.end());
  t.fk = t.fl = 0;
  for (State f : l.finals()) t.fk |= std::uint32_t{1} << (f - 1);
  for (State f : r.finals()) t.fl |= std::uint32_t{1} << (f - 1);
  return t;
}

void check_pair(const Dfa& left, const Dfa& right) {
  if (left.alphabet() != right.alphabet()) throw InputError("pair operands must share an alphabet");
  if (left.state_count() * right.state_count() > kMaxCells) throw SizeError("pair too large for canonical keys");
}

}  // namespace

std::vector<std::uint32_t> pair_canonical_key(const Dfa& left, const Dfa& right, bool with_finals) {
  check_pair(left, right);
  const Space sp(left.state_count(), right.state_count());
  auto key = triple_key(sp, triple_of(sp, left, right));
  if (!with_finals) key = structure_key(sp, key);
  key.insert(key.begin(), {static_cast<std::uint32_t>(left.state_count()),
                           static_cast<std::uint32_t>(right.state_count())});
  return key;
}

WitnessPair canonical_pair(const Dfa& left, const Dfa& right) {
  check_pair(left, right);
  const Space sp(left.state_count(), right.state_count());
  return pair_from_key(sp, triple_key(sp, triple_of(sp, left, right)));
}

nlohmann::json to_json(const SearchResult& r) {
  nlohmann::json j;
  j["m"] = r.m;
  j["n"] = r.n;
  j["k"] = r.k;
  j["mode"] = r.bound_only ? "bound" : "exact";
  j["summary"] = {{"max", r.max}, {"bound", r.bound}, {"met", r.met}, {"candidates_evaluated", r.candidates_evaluated}};
  j["distinguish_finals"] = r.distinguish_finals;
  j["witness_count"] = r.witness_count;
  j["witness_pairs"] = r.witness_pairs;
  j["witnesses"] = nlohmann::json::array();
  for (const auto& w : r.witnesses) j["witnesses"].push_back({{"left", dfa_to_json(w.left)}, {"right", dfa_to_json(w.right)}});
  return j;
}

}  // namespace ssc
