#pragma once

// Core automata types: transformations, complete DFAs, NFAs, and the
// standard algorithms over them (subset construction, minimization,
// canonical forms, membership).
//
// States are numbered 1..n everywhere in this interface.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ssc {

using State = std::uint32_t;
using Word = std::vector<std::size_t>;  // letter indices

/// A total map on {1..n}, written [1t, 2t, ..., nt].
class Transformation {
 public:
  Transformation() = default;
  Transformation(std::initializer_list<State> images);
  explicit Transformation(std::vector<State> images);

  static Transformation identity(std::size_t n);
  static Transformation constant(std::size_t n, State target);
  /// (p -> q): maps p to q, fixes everything else.
  static Transformation mapping(std::size_t n, State p, State q);
  /// (p, q): swaps p and q.
  static Transformation transposition(std::size_t n, State p, State q);

  std::size_t size() const { return images_.size(); }
  State apply(State q) const;
  State operator()(State q) const { return apply(q); }

  /// q -> next(this(q))
  Transformation then(const Transformation& next) const;
  bool is_permutation() const;
  bool is_identity() const;
  Transformation inverse() const;

  std::span<const State> images() const { return images_; }

  auto operator<=>(const Transformation&) const = default;
  bool operator==(const Transformation&) const = default;

 private:
  std::vector<State> images_;
};

std::string to_string(const Transformation& t);

/// Complete DFA. One transformation per letter; completeness is structural.
class Dfa {
 public:
  Dfa(std::size_t state_count, std::vector<std::string> alphabet,
      std::vector<Transformation> delta, std::vector<State> finals,
      State initial = 1);

  std::size_t state_count() const { return state_count_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  std::size_t letter_count() const { return alphabet_.size(); }
  const std::vector<Transformation>& delta() const { return delta_; }
  const Transformation& action(std::size_t letter) const { return delta_.at(letter); }
  State next(State q, std::size_t letter) const { return delta_.at(letter).apply(q); }
  State initial() const { return initial_; }
  const std::vector<State>& finals() const { return finals_; }
  bool is_final(State q) const;
  std::optional<std::size_t> letter_index(std::string_view name) const;

  /// Same automaton with states renamed by `relabel` (old -> new), which
  /// must be a permutation.
  Dfa relabeled(const Transformation& relabel) const;
  /// Same automaton with letters reordered: new letter i is old letter order[i].
  Dfa with_letter_order(std::span<const std::size_t> order) const;
  Dfa with_finals(std::vector<State> finals) const;

  bool operator==(const Dfa&) const = default;

 private:
  std::size_t state_count_;
  std::vector<std::string> alphabet_;
  std::vector<Transformation> delta_;
  std::vector<State> finals_;  // sorted, unique
  State initial_;
};

/// NFA with a single initial state and no epsilon moves.
class Nfa {
 public:
  Nfa(std::size_t state_count, std::vector<std::string> alphabet, State initial,
      std::vector<State> finals);

  static Nfa from_dfa(const Dfa& d);

  void add_transition(State from, std::size_t letter, State to);

  std::size_t state_count() const { return state_count_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  std::size_t letter_count() const { return alphabet_.size(); }
  State initial() const { return initial_; }
  const std::vector<State>& finals() const { return finals_; }
  bool is_final(State q) const;
  /// Sorted, duplicate-free successor list.
  const std::vector<State>& successors(State q, std::size_t letter) const;

 private:
  std::size_t state_count_;
  std::vector<std::string> alphabet_;
  State initial_;
  std::vector<State> finals_;
  std::vector<std::vector<State>> delta_;  // [(q-1) * letters + letter]
};

using StateSet = std::vector<State>;  // sorted

struct SubsetAutomaton {
  Dfa dfa;
  /// subsets[i] is the NFA state set behind DFA state i+1.
  std::vector<StateSet> subsets;
};

/// Accessible part of the subset automaton. State 1 is {initial}; states
/// are numbered in breadth-first order over letters in alphabet order.
SubsetAutomaton determinize(const Nfa& a);

/// Drops unreachable states, renumbering the rest breadth-first.
Dfa trim(const Dfa& d);

/// Minimal complete DFA for the same language (partition refinement).
Dfa minimize(const Dfa& d);

std::size_t state_complexity(const Dfa& d);

/// Ordering key that identifies a DFA up to state relabeling (initial
/// fixed) and, for alphabets of at most `kMaxPermutedLetters` letters,
/// renaming of letters.
struct CanonicalForm {
  static constexpr std::size_t kMaxPermutedLetters = 8;

  bool letter_renaming = true;
  std::vector<std::uint32_t> code;

  auto operator<=>(const CanonicalForm&) const = default;
  bool operator==(const CanonicalForm&) const = default;
};

CanonicalForm canonicalize(const Dfa& d);

/// Breadth-first relabeling key for one fixed letter order. Requires every
/// state to be reachable.
std::vector<std::uint32_t> relabel_key(const Dfa& d, std::span<const std::size_t> letter_order);

/// Isomorphism up to state relabeling and letter renaming, for any alphabet
/// size. Both DFAs are trimmed first.
bool isomorphic(const Dfa& a, const Dfa& b);

bool accepts(const Dfa& d, std::span<const std::size_t> word);
bool accepts(const Nfa& a, std::span<const std::size_t> word);
/// Acceptance when the NFA is started in `from` instead of its initial state.
bool accepts_from(const Nfa& a, State from, std::span<const std::size_t> word);
Word parse_word(const std::vector<std::string>& alphabet, const std::vector<std::string>& letters);

// DFA file format:
//   {"states": m, "alphabet": ["a","b"], "initial": 1, "finals": [2],
//    "transitions": {"a": [2,1], "b": [1,1]}}
// with transitions[x][q-1] = delta(q, x).
Dfa dfa_from_json(const nlohmann::json& j, std::string_view source = "<json>");
nlohmann::json dfa_to_json(const Dfa& d);
Dfa read_dfa_file(const std::filesystem::path& path);
void write_dfa_file(const std::filesystem::path& path, const Dfa& d);

}  // namespace ssc
