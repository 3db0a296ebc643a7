#include "ssc/automata.hpp"

#include "ssc/error.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ssc {

// ---------------------------------------------------------------------------
// Transformation

Transformation::Transformation(std::initializer_list<State> images)
    : Transformation(std::vector<State>(images)) {}

Transformation::Transformation(std::vector<State> images) : images_(std::move(images)) {
  const auto n = images_.size();
  for (State image : images_) {
    if (image < 1 || image > n) {
      throw std::invalid_argument("transformation image " + std::to_string(image) +
                                  " outside 1.." + std::to_string(n));
    }
  }
}

Transformation Transformation::identity(std::size_t n) {
  std::vector<State> images(n);
  std::iota(images.begin(), images.end(), State{1});
  return Transformation(std::move(images));
}

Transformation Transformation::constant(std::size_t n, State target) {
  return Transformation(std::vector<State>(n, target));
}

Transformation Transformation::mapping(std::size_t n, State p, State q) {
  std::vector<State> images(n);
  std::iota(images.begin(), images.end(), State{1});
  images.at(p - 1) = q;
  return Transformation(std::move(images));
}

Transformation Transformation::transposition(std::size_t n, State p, State q) {
  std::vector<State> images(n);
  std::iota(images.begin(), images.end(), State{1});
  std::swap(images.at(p - 1), images.at(q - 1));
  return Transformation(std::move(images));
}

State Transformation::apply(State q) const {
  if (q < 1 || q > images_.size()) {
    throw std::out_of_range("state " + std::to_string(q) + " outside 1.." +
                            std::to_string(images_.size()));
  }
  return images_[q - 1];
}

Transformation Transformation::then(const Transformation& next) const {
  if (next.size() != size()) throw std::invalid_argument("composing transformations of different sizes");
  std::vector<State> images(size());
  for (std::size_t i = 0; i < size(); ++i) images[i] = next.images_[images_[i] - 1];
  return Transformation(std::move(images));
}

bool Transformation::is_permutation() const {
  std::vector<char> seen(size(), 0);
  for (State image : images_) {
    if (seen[image - 1]) return false;
    seen[image - 1] = 1;
  }
  return true;
}

bool Transformation::is_identity() const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (images_[i] != i + 1) return false;
  }
  return true;
}

Transformation Transformation::inverse() const {
  if (!is_permutation()) throw std::invalid_argument("inverse of a non-permutation");
  std::vector<State> images(size());
  for (std::size_t i = 0; i < size(); ++i) images[images_[i] - 1] = static_cast<State>(i + 1);
  return Transformation(std::move(images));
}

std::string to_string(const Transformation& t) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out << ',';
    out << t.images()[i];
  }
  out << ']';
  return out.str();
}

// ---------------------------------------------------------------------------
// Dfa

Dfa::Dfa(std::size_t state_count, std::vector<std::string> alphabet,
         std::vector<Transformation> delta, std::vector<State> finals, State initial)
    : state_count_(state_count),
      alphabet_(std::move(alphabet)),
      delta_(std::move(delta)),
      finals_(std::move(finals)),
      initial_(initial) {
  if (state_count_ == 0) throw std::invalid_argument("a DFA needs at least one state");
  if (delta_.size() != alphabet_.size()) {
    throw std::invalid_argument("one transformation per letter required");
  }
  for (const auto& t : delta_) {
    if (t.size() != state_count_) throw std::invalid_argument("transformation size differs from state count");
  }
  {
    auto names = alphabet_;
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
      throw std::invalid_argument("duplicate letter in alphabet");
    }
  }
  std::sort(finals_.begin(), finals_.end());
  finals_.erase(std::unique(finals_.begin(), finals_.end()), finals_.end());
  for (State f : finals_) {
    if (f < 1 || f > state_count_) throw std::invalid_argument("final state out of range");
  }
  if (initial_ < 1 || initial_ > state_count_) throw std::invalid_argument("initial state out of range");
}

bool Dfa::is_final(State q) const {
  return std::binary_search(finals_.begin(), finals_.end(), q);
}

std::optional<std::size_t> Dfa::letter_index(std::string_view name) const {
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    if (alphabet_[i] == name) return i;
  }
  return std::nullopt;
}

Dfa Dfa::relabeled(const Transformation& relabel) const {
  if (relabel.size() != state_count_ || !relabel.is_permutation()) {
    throw std::invalid_argument("relabeling must be a permutation of the states");
  }
  std::vector<Transformation> delta;
  delta.reserve(delta_.size());
  for (const auto& t : delta_) {
    std::vector<State> images(state_count_);
    for (State q = 1; q <= state_count_; ++q) images[relabel(q) - 1] = relabel(t(q));
    delta.emplace_back(std::move(images));
  }
  std::vector<State> finals;
  for (State f : finals_) finals.push_back(relabel(f));
  return Dfa(state_count_, alphabet_, std::move(delta), std::move(finals), relabel(initial_));
}

Dfa Dfa::with_letter_order(std::span<const std::size_t> order) const {
  if (order.size() != alphabet_.size()) throw std::invalid_argument("letter order has wrong length");
  std::vector<std::string> alphabet;
  std::vector<Transformation> delta;
  for (std::size_t old : order) {
    alphabet.push_back(alphabet_.at(old));
    delta.push_back(delta_.at(old));
  }
  return Dfa(state_count_, std::move(alphabet), std::move(delta), finals_, initial_);
}

Dfa Dfa::with_finals(std::vector<State> finals) const {
  return Dfa(state_count_, alphabet_, delta_, std::move(finals), initial_);
}

// ---------------------------------------------------------------------------
// Nfa

Nfa::Nfa(std::size_t state_count, std::vector<std::string> alphabet, State initial,
         std::vector<State> finals)
    : state_count_(state_count),
      alphabet_(std::move(alphabet)),
      initial_(initial),
      finals_(std::move(finals)),
      delta_(state_count * alphabet_.size()) {
  if (state_count_ == 0) throw std::invalid_argument("an NFA needs at least one state");
  if (initial_ < 1 || initial_ > state_count_) throw std::invalid_argument("initial state out of range");
  std::sort(finals_.begin(), finals_.end());
  finals_.erase(std::unique(finals_.begin(), finals_.end()), finals_.end());
  for (State f : finals_) {
    if (f < 1 || f > state_count_) throw std::invalid_argument("final state out of range");
  }
}

Nfa Nfa::from_dfa(const Dfa& d) {
  Nfa a(d.state_count(), d.alphabet(), d.initial(), d.finals());
  for (State q = 1; q <= d.state_count(); ++q) {
    for (std::size_t x = 0; x < d.letter_count(); ++x) a.add_transition(q, x, d.next(q, x));
  }
  return a;
}

void Nfa::add_transition(State from, std::size_t letter, State to) {
  if (from < 1 || from > state_count_ || to < 1 || to > state_count_) {
    throw std::out_of_range("transition endpoint out of range");
  }
  if (letter >= alphabet_.size()) throw std::out_of_range("letter out of range");
  auto& succ = delta_[(from - 1) * alphabet_.size() + letter];
  auto it = std::lower_bound(succ.begin(), succ.end(), to);
  if (it == succ.end() || *it != to) succ.insert(it, to);
}

bool Nfa::is_final(State q) const {
  return std::binary_search(finals_.begin(), finals_.end(), q);
}

const std::vector<State>& Nfa::successors(State q, std::size_t letter) const {
  if (q < 1 || q > state_count_) throw std::out_of_range("state out of range");
  if (letter >= alphabet_.size()) throw std::out_of_range("letter out of range");
  return delta_[(q - 1) * alphabet_.size() + letter];
}

// ---------------------------------------------------------------------------
// Subset construction

namespace {

struct WordsHash {
  std::size_t operator()(const std::vector<std::uint64_t>& words) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : words) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

SubsetAutomaton determinize(const Nfa& a) {
  const std::size_t n = a.state_count();
  const std::size_t k = a.letter_count();
  const std::size_t width = (n + 63) / 64;

  std::vector<std::vector<std::uint64_t>> sets;
  std::unordered_map<std::vector<std::uint64_t>, State, WordsHash> ids;
  std::vector<std::vector<State>> table;  // table[id-1][letter]

  auto intern = [&](std::vector<std::uint64_t> words) -> State {
    auto [it, inserted] = ids.try_emplace(words, static_cast<State>(sets.size() + 1));
    if (inserted) sets.push_back(std::move(words));
    return it->second;
  };

  std::vector<std::uint64_t> start(width, 0);
  start[(a.initial() - 1) / 64] |= std::uint64_t{1} << ((a.initial() - 1) % 64);
  intern(std::move(start));

  for (std::size_t id = 0; id < sets.size(); ++id) {
    std::vector<State> row(k);
    for (std::size_t x = 0; x < k; ++x) {
      std::vector<std::uint64_t> next(width, 0);
      for (std::size_t w = 0; w < width; ++w) {
        for (std::uint64_t bits = sets[id][w]; bits; bits &= bits - 1) {
          const auto q = static_cast<State>(w * 64 + std::countr_zero(bits) + 1);
          for (State r : a.successors(q, x)) next[(r - 1) / 64] |= std::uint64_t{1} << ((r - 1) % 64);
        }
      }
      row[x] = intern(std::move(next));
    }
    table.push_back(std::move(row));
  }

  std::vector<Transformation> delta;
  for (std::size_t x = 0; x < k; ++x) {
    std::vector<State> images(sets.size());
    for (std::size_t id = 0; id < sets.size(); ++id) images[id] = table[id][x];
    delta.emplace_back(std::move(images));
  }

  std::vector<StateSet> subsets;
  std::vector<State> finals;
  for (std::size_t id = 0; id < sets.size(); ++id) {
    StateSet members;
    bool accepting = false;
    for (std::size_t w = 0; w < width; ++w) {
      for (std::uint64_t bits = sets[id][w]; bits; bits &= bits - 1) {
        const auto q = static_cast<State>(w * 64 + std::countr_zero(bits) + 1);
        members.push_back(q);
        accepting = accepting || a.is_final(q);
      }
    }
    if (accepting) finals.push_back(static_cast<State>(id + 1));
    subsets.push_back(std::move(members));
  }
  return {Dfa(sets.size(), a.alphabet(), std::move(delta), std::move(finals)), std::move(subsets)};
}

// ---------------------------------------------------------------------------
// Trimming and minimization

namespace {

// Renumbers the states reachable from `initial` breadth-first; returns the
// old (0-based) state of each new state.
std::vector<std::uint32_t> bfs_order(const Dfa& d, std::span<const std::size_t> letter_order,
                                     std::vector<std::uint32_t>& new_id) {
  constexpr auto kUnseen = ~std::uint32_t{0};
  new_id.assign(d.state_count(), kUnseen);
  std::vector<std::uint32_t> order;
  order.reserve(d.state_count());
  new_id[d.initial() - 1] = 0;
  order.push_back(d.initial() - 1);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const State q = order[head] + 1;
    for (std::size_t x : letter_order) {
      const std::uint32_t r = d.next(q, x) - 1;
      if (new_id[r] == kUnseen) {
        new_id[r] = static_cast<std::uint32_t>(order.size());
        order.push_back(r);
      }
    }
  }
  return order;
}

std::vector<std::size_t> natural_order(std::size_t k) {
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

}  // namespace

Dfa trim(const Dfa& d) {
  const auto letters = natural_order(d.letter_count());
  std::vector<std::uint32_t> new_id;
  const auto order = bfs_order(d, letters, new_id);
  std::vector<Transformation> delta;
  for (std::size_t x = 0; x < d.letter_count(); ++x) {
    std::vector<State> images(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) images[i] = new_id[d.next(order[i] + 1, x) - 1] + 1;
    delta.emplace_back(std::move(images));
  }
  std::vector<State> finals;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (d.is_final(order[i] + 1)) finals.push_back(static_cast<State>(i + 1));
  }
  return Dfa(order.size(), d.alphabet(), std::move(delta), std::move(finals));
}

Dfa minimize(const Dfa& input) {
  const Dfa d = trim(input);
  const std::size_t n = d.state_count();
  const std::size_t k = d.letter_count();

  // Predecessor lists per letter, CSR layout over 0-based states.
  std::vector<std::vector<std::uint32_t>> pred_start(k, std::vector<std::uint32_t>(n + 1, 0));
  std::vector<std::vector<std::uint32_t>> preds(k, std::vector<std::uint32_t>(n));
  for (std::size_t x = 0; x < k; ++x) {
    auto& start = pred_start[x];
    for (State q = 1; q <= n; ++q) ++start[d.next(q, x)];
    for (std::size_t i = 1; i <= n; ++i) start[i] += start[i - 1];
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (State q = 1; q <= n; ++q) preds[x][fill[d.next(q, x) - 1]++] = q - 1;
  }

  struct Block {
    std::uint32_t begin, end, marked;
  };
  std::vector<std::uint32_t> elems(n), pos(n), block_of(n);
  std::vector<Block> blocks;
  {
    std::uint32_t at = 0;
    for (int pass = 0; pass < 2; ++pass) {
      const std::uint32_t begin = at;
      for (State q = 1; q <= n; ++q) {
        if (d.is_final(q) == (pass == 0)) {
          elems[at] = q - 1;
          pos[q - 1] = at;
          block_of[q - 1] = static_cast<std::uint32_t>(blocks.size());
          ++at;
        }
      }
      if (at > begin) blocks.push_back({begin, at, 0});
    }
  }

  std::vector<char> pending(blocks.size() * k, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> work;
  auto push = [&](std::uint32_t b, std::uint32_t x) {
    if (!pending[b * k + x]) {
      pending[b * k + x] = 1;
      work.emplace_back(b, x);
    }
  };
  if (blocks.size() == 2) {
    const std::uint32_t smaller =
        (blocks[0].end - blocks[0].begin) <= (blocks[1].end - blocks[1].begin) ? 0 : 1;
    for (std::uint32_t x = 0; x < k; ++x) push(smaller, x);
  }

  std::vector<std::uint32_t> splitter_preds, touched;
  while (!work.empty()) {
    const auto [b, x] = work.back();
    work.pop_back();
    pending[b * k + x] = 0;

    splitter_preds.clear();
    for (std::uint32_t i = blocks[b].begin; i < blocks[b].end; ++i) {
      const std::uint32_t q = elems[i];
      for (std::uint32_t j = pred_start[x][q]; j < pred_start[x][q + 1]; ++j) {
        splitter_preds.push_back(preds[x][j]);
      }
    }
    for (std::uint32_t p : splitter_preds) {
      Block& blk = blocks[block_of[p]];
      if (pos[p] < blk.begin + blk.marked) continue;
      if (blk.marked == 0) touched.push_back(block_of[p]);
      const std::uint32_t slot = blk.begin + blk.marked;
      const std::uint32_t other = elems[slot];
      std::swap(elems[slot], elems[pos[p]]);
      pos[other] = pos[p];
      pos[p] = slot;
      ++blk.marked;
    }
    for (std::uint32_t y : touched) {
      const Block blk = blocks[y];
      blocks[y].marked = 0;
      if (blk.marked == blk.end - blk.begin) continue;
      const auto fresh = static_cast<std::uint32_t>(blocks.size());
      blocks.push_back({blk.begin, blk.begin + blk.marked, 0});
      blocks[y].begin = blk.begin + blk.marked;
      for (std::uint32_t i = blocks[fresh].begin; i < blocks[fresh].end; ++i) block_of[elems[i]] = fresh;
      pending.resize(blocks.size() * k, 0);
      const bool fresh_smaller =
          (blocks[fresh].end - blocks[fresh].begin) <= (blocks[y].end - blocks[y].begin);
      for (std::uint32_t c = 0; c < k; ++c) {
        if (pending[y * k + c]) {
          push(fresh, c);
        } else {
          push(fresh_smaller ? fresh : y, c);
        }
      }
    }
    touched.clear();
  }

  // Quotient, numbered breadth-first from the initial block.
  constexpr auto kUnseen = ~std::uint32_t{0};
  std::vector<std::uint32_t> block_id(blocks.size(), kUnseen);
  std::vector<std::uint32_t> representative;
  block_id[block_of[d.initial() - 1]] = 0;
  representative.push_back(d.initial() - 1);
  for (std::size_t head = 0; head < representative.size(); ++head) {
    for (std::size_t x = 0; x < k; ++x) {
      const std::uint32_t b = block_of[d.next(representative[head] + 1, x) - 1];
      if (block_id[b] == kUnseen) {
        block_id[b] = static_cast<std::uint32_t>(representative.size());
        representative.push_back(elems[blocks[b].begin]);
      }
    }
  }
  std::vector<Transformation> delta;
  for (std::size_t x = 0; x < k; ++x) {
    std::vector<State> images(representative.size());
    for (std::size_t i = 0; i < representative.size(); ++i) {
      images[i] = block_id[block_of[d.next(representative[i] + 1, x) - 1]] + 1;
    }
    delta.emplace_back(std::move(images));
  }
  std::vector<State> finals;
  for (std::size_t i = 0; i < representative.size(); ++i) {
    if (d.is_final(representative[i] + 1)) finals.push_back(static_cast<State>(i + 1));
  }
  return Dfa(representative.size(), d.alphabet(), std::move(delta), std::move(finals));
}

std::size_t state_complexity(const Dfa& d) { return minimize(d).state_count(); }

// ---------------------------------------------------------------------------
// Canonical forms

std::vector<std::uint32_t> relabel_key(const Dfa& d, std::span<const std::size_t> letter_order) {
  std::vector<std::uint32_t> new_id;
  const auto order = bfs_order(d, letter_order, new_id);
  if (order.size() != d.state_count()) {
    throw std::invalid_argument("relabel_key needs every state reachable; trim first");
  }
  std::vector<std::uint32_t> code;
  code.reserve(2 + d.state_count() * (letter_order.size() + 1));
  code.push_back(static_cast<std::uint32_t>(d.state_count()));
  code.push_back(static_cast<std::uint32_t>(letter_order.size()));
  for (std::uint32_t old : order) {
    for (std::size_t x : letter_order) code.push_back(new_id[d.next(old + 1, x) - 1]);
  }
  for (std::uint32_t old : order) code.push_back(d.is_final(old + 1) ? 1 : 0);
  return code;
}

CanonicalForm canonicalize(const Dfa& input) {
  const Dfa d = trim(input);
  auto order = natural_order(d.letter_count());
  CanonicalForm form;
  if (d.letter_count() > CanonicalForm::kMaxPermutedLetters) {
    form.letter_renaming = false;
    form.code = relabel_key(d, order);
    return form;
  }
  form.code = relabel_key(d, order);
  while (std::next_permutation(order.begin(), order.end())) {
    auto code = relabel_key(d, order);
    if (code < form.code) form.code = std::move(code);
  }
  return form;
}

namespace {

// Backtracking search for a letter bijection under which the breadth-first
// state correspondence is consistent. Used for alphabets too large to
// enumerate all letter orders.
class IsomorphismSearch {
 public:
  IsomorphismSearch(const Dfa& a, const Dfa& b) : a_(a), b_(b), image_(a.letter_count()) {}

  bool run() {
    used_.assign(b_.letter_count(), 0);
    return extend(0);
  }

 private:
  static constexpr auto kUnset = ~std::uint32_t{0};

  // Propagates the state map through letters 0..assigned-1.
  bool consistent(std::size_t assigned, std::vector<std::uint32_t>& sigma) const {
    const std::size_t n = a_.state_count();
    sigma.assign(n, kUnset);
    std::vector<std::uint32_t> sigma_inv(n, kUnset);
    std::vector<std::uint32_t> queue{a_.initial() - 1};
    sigma[a_.initial() - 1] = b_.initial() - 1;
    sigma_inv[b_.initial() - 1] = a_.initial() - 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint32_t q = queue[head];
      for (std::size_t x = 0; x < assigned; ++x) {
        const std::uint32_t ta = a_.next(q + 1, x) - 1;
        const std::uint32_t tb = b_.next(sigma[q] + 1, image_[x]) - 1;
        if (sigma[ta] == kUnset && sigma_inv[tb] == kUnset) {
          sigma[ta] = tb;
          sigma_inv[tb] = ta;
          queue.push_back(ta);
        } else if (sigma[ta] != tb || sigma_inv[tb] != ta) {
          return false;
        }
      }
    }
    return true;
  }

  bool extend(std::size_t x) {
    std::vector<std::uint32_t> sigma;
    if (x == a_.letter_count()) {
      if (!consistent(x, sigma)) return false;
      for (State q = 1; q <= a_.state_count(); ++q) {
        if (sigma[q - 1] == kUnset) return false;
        if (a_.is_final(q) != b_.is_final(sigma[q - 1] + 1)) return false;
      }
      return true;
    }
    for (std::size_t y = 0; y < b_.letter_count(); ++y) {
      if (used_[y]) continue;
      image_[x] = y;
      if (!consistent(x + 1, sigma)) continue;
      used_[y] = 1;
      if (extend(x + 1)) return true;
      used_[y] = 0;
    }
    return false;
  }

  const Dfa& a_;
  const Dfa& b_;
  std::vector<std::size_t> image_;
  std::vector<char> used_;
};

}  // namespace

bool isomorphic(const Dfa& a_in, const Dfa& b_in) {
  const Dfa a = trim(a_in);
  const Dfa b = trim(b_in);
  if (a.state_count() != b.state_count() || a.letter_count() != b.letter_count() ||
      a.finals().size() != b.finals().size()) {
    return false;
  }
  if (a.letter_count() <= CanonicalForm::kMaxPermutedLetters) return canonicalize(a) == canonicalize(b);
  return IsomorphismSearch(a, b).run();
}

// ---------------------------------------------------------------------------
// Membership

bool accepts(const Dfa& d, std::span<const std::size_t> word) {
  State q = d.initial();
  for (std::size_t x : word) q = d.next(q, x);
  return d.is_final(q);
}

bool accepts_from(const Nfa& a, State from, std::span<const std::size_t> word) {
  std::vector<char> current(a.state_count(), 0), next(a.state_count(), 0);
  current.at(from - 1) = 1;
  for (std::size_t x : word) {
    std::fill(next.begin(), next.end(), 0);
    for (State q = 1; q <= a.state_count(); ++q) {
      if (!current[q - 1]) continue;
      for (State r : a.successors(q, x)) next[r - 1] = 1;
    }
    current.swap(next);
  }
  for (State f : a.finals()) {
    if (current[f - 1]) return true;
  }
  return false;
}

bool accepts(const Nfa& a, std::span<const std::size_t> word) {
  return accepts_from(a, a.initial(), word);
}

Word parse_word(const std::vector<std::string>& alphabet, const std::vector<std::string>& letters) {
  Word word;
  for (const auto& letter : letters) {
    auto it = std::find(alphabet.begin(), alphabet.end(), letter);
    if (it == alphabet.end()) throw InputError("letter '" + letter + "' not in alphabet");
    word.push_back(static_cast<std::size_t>(it - alphabet.begin()));
  }
  return word;
}

}  // namespace ssc
