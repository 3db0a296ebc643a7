#include "ssc/disting.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "ssc/error.hpp"

namespace ssc {

std::vector<UniqueInEdge> unique_in_subgraph(const Nfa& a) {
  const std::size_t n = a.state_count();
  std::vector<UniqueInEdge> out;
  std::vector<std::size_t> in_count(n + 1);
  std::vector<State> last_from(n + 1);
  for (std::size_t x = 0; x < a.letter_count(); ++x) {
    std::fill(in_count.begin(), in_count.end(), 0);
    for (State p = 1; p <= n; ++p) {
      for (State q : a.successors(p, x)) {
        ++in_count[q];
        last_from[q] = p;
      }
    }
    for (State q = 1; q <= n; ++q) {
      if (in_count[q] == 1) out.push_back({last_from[q], x, q});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<State> uniquely_distinguishable(const Nfa& a) {
  if (a.finals().size() != 1) return {};
  const auto edges = unique_in_subgraph(a);
  std::vector<std::vector<State>> into(a.state_count() + 1);
  for (const auto& e : edges) into[e.to].push_back(e.from);
  std::vector<char> in(a.state_count() + 1, 0);
  std::vector<State> stack{a.finals().front()};
  in[stack.front()] = 1;
  while (!stack.empty()) {
    const State q = stack.back();
    stack.pop_back();
    for (State p : into[q]) {
      if (!in[p]) {
        in[p] = 1;
        stack.push_back(p);
      }
    }
  }
  std::vector<State> out;
  for (State q = 1; q <= a.state_count(); ++q) {
    if (in[q]) out.push_back(q);
  }
  return out;
}

bool subsets_pairwise_distinct(const Nfa& a) { return uniquely_distinguishable(a).size() == a.state_count(); }

std::size_t brute_subset_classes(const Nfa& a) {
  const std::size_t n = a.state_count();
  if (n > kOracleStateLimit) {
    throw SizeError("subset oracle needs at most " + std::to_string(kOracleStateLimit) + " states");
  }
  const std::size_t total = std::size_t{1} << n;
  const std::size_t k = a.letter_count();
  std::vector<std::uint32_t> single(n * k, 0);
  for (State p = 1; p <= n; ++p) {
    for (std::size_t x = 0; x < k; ++x) {
      for (State q : a.successors(p, x)) single[(p - 1) * k + x] |= std::uint32_t{1} << (q - 1);
    }
  }
  std::vector<std::uint32_t> next(total * k, 0);
  for (std::size_t s = 1; s < total; ++s) {
    const std::size_t low = static_cast<std::size_t>(std::countr_zero(s));
    const std::size_t rest = s & (s - 1);
    for (std::size_t x = 0; x < k; ++x) next[s * k + x] = next[rest * k + x] | single[low * k + x];
  }
  std::uint32_t final_mask = 0;
  for (State f : a.finals()) final_mask |= std::uint32_t{1} << (f - 1);

  // Moore refinement: class ids from (class, successor classes) signatures.
  std::vector<std::uint32_t> cls(total);
  for (std::size_t s = 0; s < total; ++s) cls[s] = (s & final_mask) ? 1 : 0;
  std::size_t classes = 0;
  for (std::size_t s = 0; s < total; ++s) classes = std::max<std::size_t>(classes, cls[s] + 1);
  if (total == 1) classes = 1;
  for (;;) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    std::vector<std::uint32_t> refined(total);
    std::vector<std::uint32_t> sig(k + 1);
    for (std::size_t s = 0; s < total; ++s) {
      sig[0] = cls[s];
      for (std::size_t x = 0; x < k; ++x) sig[x + 1] = cls[next[s * k + x]];
      refined[s] = ids.try_emplace(sig, static_cast<std::uint32_t>(ids.size())).first->second;
    }
    const bool stable = ids.size() == classes;
    cls = std::move(refined);
    classes = ids.size();
    if (stable) break;
  }
  return classes;
}

bool brute_subsets_pairwise_distinct(const Nfa& a) {
  return brute_subset_classes(a) == (std::size_t{1} << a.state_count());
}

std::pair<Dfa, Dfa> ternary_witness(std::size_t m, std::size_t n) {
  if (m < 2 || n < 2) throw InputError("ternary_witness needs m, n >= 2");
  const std::vector<std::string> sigma{"a", "b", "c"};
  auto shift = [](std::size_t k) {
    std::vector<State> images(k);
    for (State i = 1; i <= k; ++i) images[i - 1] = i == k ? 1 : i + 1;
    return Transformation(std::move(images));
  };
  std::vector<State> c_left(m, 1);
  c_left[0] = 2;
  Dfa left(m, sigma, {shift(m), Transformation::constant(m, 1), Transformation(std::move(c_left))},
           {static_cast<State>(m)});
  Dfa right(n, sigma,
            {Transformation::constant(n, 1), shift(n), Transformation::constant(n, static_cast<State>(n))},
            {static_cast<State>(n)});
  return {std::move(left), std::move(right)};
}

}  // namespace ssc
