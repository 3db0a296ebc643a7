#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ssc/automata.hpp"

namespace ssc::test {

/// SSC_SEED overrides the fixed default seed of the randomized suites.
inline std::uint64_t seed() {
  const char* env = std::getenv("SSC_SEED");
  return env && *env ? std::stoull(env) : 20240611ULL;
}

inline std::filesystem::path data_file(const std::string& name) { return std::filesystem::path(SSC_DATA_DIR) / name; }

inline Transformation random_transformation(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<State> d(1, static_cast<State>(n));
  std::vector<State> images(n);
  for (auto& x : images) x = d(rng);
  return Transformation(std::move(images));
}

inline std::vector<std::string> letters(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

inline Dfa random_dfa(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<Transformation> delta;
  for (std::size_t i = 0; i < k; ++i) delta.push_back(random_transformation(rng, n));
  std::vector<State> finals;
  for (State q = 1; q <= n; ++q) {
    if (rng() & 1) finals.push_back(q);
  }
  return Dfa(n, letters(k), std::move(delta), std::move(finals));
}

inline Nfa random_nfa(std::mt19937_64& rng, std::size_t n, std::size_t k, double density = 0.3) {
  std::bernoulli_distribution edge(density);
  std::vector<State> finals;
  for (State q = 1; q <= n; ++q) {
    if (rng() & 1) finals.push_back(q);
  }
  Nfa a(n, letters(k), 1, finals);
  for (State p = 1; p <= n; ++p) {
    for (std::size_t x = 0; x < k; ++x) {
      for (State q = 1; q <= n; ++q) {
        if (edge(rng)) a.add_transition(p, x, q);
      }
    }
  }
  return a;
}

inline Word random_word(std::mt19937_64& rng, std::size_t k, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), letter(0, k - 1);
  Word w(len(rng));
  for (auto& x : w) x = letter(rng);
  return w;
}

}  // namespace ssc::test
