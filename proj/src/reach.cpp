#include "ssc/reach.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "detail/checkpoint.hpp"
#include "detail/sha256.hpp"
#include "detail/step_kernel.hpp"
#include "ssc/error.hpp"

namespace ssc {

std::string to_string(const ExtremalLetter& a) { return to_string(a.s) + ";" + to_string(a.t); }

ProductSubset extremal_step(const ProductSubset& s, const ExtremalLetter& a) {
  if (a.s.size() != s.rows() || a.t.size() != s.columns()) {
    throw InputError("letter " + to_string(a) + " does not act on a " + std::to_string(s.rows()) + "x" +
                     std::to_string(s.columns()) + " grid");
  }
  ProductSubset out(s.rows(), s.columns());
  for (auto [p, q] : s.cells()) {
    out.insert(a.s(p), q);
    out.insert(p, a.t(q));
  }
  return out;
}

std::optional<std::uint64_t> transformation_count(std::size_t n) {
  if (n == 0) throw InputError("transformation_count needs n >= 1");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > UINT64_MAX / n) return std::nullopt;
    total *= n;
  }
  return total;
}

Transformation transformation_at(std::size_t n, std::uint64_t rank) {
  const auto total = transformation_count(n);
  if (!total || rank >= *total) throw InputError("transformation rank out of range");
  std::vector<State> images(n);
  for (std::size_t i = n; i-- > 0;) {
    images[i] = static_cast<State>(rank % n + 1);
    rank /= n;
  }
  return Transformation(std::move(images));
}

std::uint64_t transformation_rank(const Transformation& t) {
  std::uint64_t rank = 0;
  for (State x : t.images()) rank = rank * t.size() + (x - 1);
  return rank;
}

// ---------------------------------------------------------------------------

ExtremalAlphabet::ExtremalAlphabet(std::size_t m, std::size_t n, bool full, std::vector<ExtremalLetter> letters)
    : m_(m), n_(n), full_(full), letters_(std::move(letters)) {
  if (m == 0 || n == 0) throw InputError("grid dimensions must be positive");
  for (const auto& a : letters_) {
    if (a.s.size() != m || a.t.size() != n) {
      throw InputError("letter " + to_string(a) + " does not act on a " + std::to_string(m) + "x" +
                       std::to_string(n) + " grid");
    }
  }
  id_ = full_ ? "full" : detail::sha256_hex(letters_to_json(letters_).dump());
}

ExtremalAlphabet ExtremalAlphabet::full(std::size_t m, std::size_t n) { return ExtremalAlphabet(m, n, true, {}); }

ExtremalAlphabet ExtremalAlphabet::letters(std::size_t m, std::size_t n, std::vector<ExtremalLetter> letters) {
  return ExtremalAlphabet(m, n, false, std::move(letters));
}

nlohmann::json letters_to_json(const std::vector<ExtremalLetter>& letters) {
  auto out = nlohmann::json::array();
  for (const auto& a : letters) {
    const auto s = a.s.images();
    const auto t = a.t.images();
    out.push_back({{"s", std::vector<State>(s.begin(), s.end())}, {"t", std::vector<State>(t.begin(), t.end())}});
  }
  return out;
}

namespace {

Transformation parse_images(const nlohmann::json& value, std::size_t k, const std::string& where) {
  if (!value.is_array() || value.size() != k) {
    throw InputError(where + ": expected an array of " + std::to_string(k) + " states");
  }
  std::vector<State> images;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& x = value[i];
    if (!x.is_number_integer() || x.get<std::int64_t>() < 1 || x.get<std::int64_t>() > static_cast<std::int64_t>(k)) {
      throw InputError(where + "[" + std::to_string(i) + "]: expected a state in 1.." + std::to_string(k));
    }
    images.push_back(x.get<State>());
  }
  return Transformation(std::move(images));
}

}  // namespace

std::vector<ExtremalLetter> letters_from_json(const nlohmann::json& j, std::size_t m, std::size_t n,
                                              std::string_view source) {
  const std::string src(source);
  if (!j.is_array()) throw InputError(src + ": expected a JSON array of letters");
  std::vector<ExtremalLetter> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = src + ": [" + std::to_string(i) + "]";
    if (!j[i].is_object() || !j[i].contains("s") || !j[i].contains("t")) {
      throw InputError(where + ": expected an object with fields 's' and 't'");
    }
    out.push_back({parse_images(j[i]["s"], m, where + ".s"), parse_images(j[i]["t"], n, where + ".t")});
  }
  return out;
}

std::vector<ExtremalLetter> read_letter_file(const std::filesystem::path& path, std::size_t m, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return letters_from_json(j, m, n, path.string());
}

void write_letter_file(const std::filesystem::path& path, const std::vector<ExtremalLetter>& letters) {
  std::ofstream out(path);
  if (!out) throw InputError(path.string() + ": cannot write");
  out << letters_to_json(letters).dump(2) << '\n';
}

// ---------------------------------------------------------------------------

bool ReachReport::same_outcome(const ReachReport& o) const {
  return m == o.m && n == o.n && alphabet == o.alphabet && alphabet_id == o.alphabet_id &&
         letter_count == o.letter_count && bound == o.bound && reached == o.reached && complete == o.complete &&
         unreached_sample == o.unreached_sample && generations == o.generations && lineage == o.lineage;
}

nlohmann::json to_json(const ReachReport& r) {
  return {
      {"m", r.m},
      {"n", r.n},
      {"alphabet", r.alphabet},
      {"alphabet_id", r.alphabet_id},
      {"letter_count", r.letter_count},
      {"bound", r.bound},
      {"reached", r.reached},
      {"complete", r.complete},
      {"unreached_sample", r.unreached_sample},
      {"generations", r.generations},
      {"elapsed_seconds", r.elapsed_seconds},
      {"lineage", r.lineage},
  };
}

namespace {

/// Letters the explorer applies, as image tables.
class LetterTables {
 public:
  LetterTables(std::size_t m, std::size_t n, const ExtremalAlphabet& alphabet)
      : full_(alphabet.is_full()), left_(m), right_(n) {
    if (full_) {
      const auto count_m = *transformation_count(m);
      const auto count_n = *transformation_count(n);
      for (std::uint64_t r = 0; r < count_m; ++r) left_.add(transformation_at(m, r));
      for (std::uint64_t r = 0; r < count_n; ++r) right_.add(transformation_at(n, r));
    } else {
      for (const auto& a : alphabet.letters()) {
        left_.add(a.s);
        right_.add(a.t);
      }
    }
  }

  /// Calls emit(X) for every successor of `bits` (with repeats in letter mode).
  template <class Emit>
  void successors(const detail::GridKernel& grid, std::uint64_t bits, std::vector<std::uint64_t>& col_buf,
                  std::vector<std::uint64_t>& row_buf, Emit&& emit) const {
    std::uint32_t rows[64], cols[64];
    grid.split(bits, rows, cols);
    if (!full_) {
      for (std::size_t i = 0; i < left_.size(); ++i) {
        emit(grid.column_part(cols, left_.table(i)) | grid.row_part(rows, right_.table(i)));
      }
      return;
    }
    col_buf.clear();
    row_buf.clear();
    for (std::size_t i = 0; i < left_.size(); ++i) col_buf.push_back(grid.column_part(cols, left_.table(i)));
    for (std::size_t i = 0; i < right_.size(); ++i) row_buf.push_back(grid.row_part(rows, right_.table(i)));
    std::sort(col_buf.begin(), col_buf.end());
    col_buf.erase(std::unique(col_buf.begin(), col_buf.end()), col_buf.end());
    std::sort(row_buf.begin(), row_buf.end());
    row_buf.erase(std::unique(row_buf.begin(), row_buf.end()), row_buf.end());
    for (auto c : col_buf) {
      for (auto r : row_buf) emit(c | r);
    }
  }

 private:
  bool full_;
  detail::ImageTables left_;
  detail::ImageTables right_;
};

/// Per-side limit on |T_k| for full-alphabet exploration.
constexpr std::uint64_t kFullSideLimit = 50000;

void check_size(std::size_t m, std::size_t n, const ExtremalAlphabet& alphabet) {
  if (m == 0 || n == 0) throw InputError("grid dimensions must be positive");
  if (alphabet.rows() != m || alphabet.columns() != n) throw InputError("alphabet is for a different grid");
  if (m * n > kEnumerationGuard) {
    throw SizeError("bfs_reach: m*n = " + std::to_string(m * n) + " exceeds the enumeration guard of " +
                    std::to_string(kEnumerationGuard));
  }
  if (alphabet.is_full()) {
    for (std::size_t k : {m, n}) {
      const auto count = transformation_count(k);
      if (!count || *count > kFullSideLimit) {
        throw SizeError("bfs_reach: full alphabet with " + std::to_string(k) + "^" + std::to_string(k) +
                        " transformations per side is too large");
      }
    }
  }
}

std::vector<std::uint64_t> expand(const detail::GridKernel& grid, const LetterTables& tables,
                                  const std::vector<std::uint64_t>& frontier, std::vector<std::uint64_t>& visited,
                                  unsigned workers) {
  constexpr std::size_t kChunk = 64;
  std::atomic<std::size_t> cursor{0};
  std::vector<std::vector<std::uint64_t>> found(workers);
  auto work = [&](unsigned w) {
    std::vector<std::uint64_t> col_buf, row_buf;
    auto& out = found[w];
    auto mark = [&](std::uint64_t x) {
      std::atomic_ref<std::uint64_t> word(visited[x >> 6]);
      const std::uint64_t bit = std::uint64_t{1} << (x & 63);
      if (word.load(std::memory_order_relaxed) & bit) return;
      if (!(word.fetch_or(bit, std::memory_order_relaxed) & bit)) out.push_back(x);
    };
    for (;;) {
      const std::size_t begin = cursor.fetch_add(kChunk);
      if (begin >= frontier.size()) break;
      const std::size_t end = std::min(frontier.size(), begin + kChunk);
      for (std::size_t i = begin; i < end; ++i) tables.successors(grid, frontier[i], col_buf, row_buf, mark);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::vector<std::uint64_t> next;
  for (auto& part : found) next.insert(next.end(), part.begin(), part.end());
  std::sort(next.begin(), next.end());
  return next;
}

bool test_bit(const std::vector<std::uint64_t>& words, std::uint64_t x) { return (words[x >> 6] >> (x & 63)) & 1U; }

}  // namespace

ReachReport bfs_reach(std::size_t m, std::size_t n, const ExtremalAlphabet& alphabet, const BfsOptions& options) {
  check_size(m, n, alphabet);
  const auto start = std::chrono::steady_clock::now();
  const detail::GridKernel grid(m, n);
  const LetterTables tables(m, n, alphabet);
  const std::uint64_t total = std::uint64_t{1} << (m * n);

  ReachReport report;
  report.m = m;
  report.n = n;
  report.alphabet = alphabet.is_full() ? "full" : "letters";
  report.alphabet_id = alphabet.id();
  report.letter_count = alphabet.is_full() ? *transformation_count(m) * *transformation_count(n)
                                           : alphabet.letters().size();
  report.bound = static_cast<std::uint64_t>(bound_f(m, n));
  report.lineage = detail::sha256_hex(std::to_string(m) + "," + std::to_string(n) + "," + alphabet.id()).substr(0, 16);

  detail::CheckpointState state;
  if (options.resume) {
    if (!options.checkpoint_dir) throw InputError("resume requires a checkpoint directory");
    state = detail::read_latest_checkpoint(*options.checkpoint_dir, m, n, alphabet.id());
  } else {
    state.m = m;
    state.n = n;
    state.alphabet_id = alphabet.id();
    state.visited.assign((total + 63) / 64, 0);
    state.visited[0] = std::uint64_t{1} << 1;
    state.frontier = {1};
  }

  const unsigned workers = std::max(1U, options.workers);
  while (!state.frontier.empty()) {
    if (options.stop_after_generations && state.generation >= *options.stop_after_generations) break;
    state.frontier = expand(grid, tables, state.frontier, state.visited, workers);
    ++state.generation;
    if (options.checkpoint_dir) detail::write_checkpoint(*options.checkpoint_dir, state);
  }

  for (std::uint64_t x = 0; x < total; ++x) {
    const bool seen = test_bit(state.visited, x);
    const bool valid = grid.valid(x);
    if (seen) {
      if (!valid) throw InvariantError("reached an invalid subset, encoding " + std::to_string(x));
      ++report.reached;
    } else if (valid && report.unreached_sample.size() < ReachReport::kSampleLimit) {
      report.unreached_sample.push_back(x);
    }
  }
  if (report.reached > report.bound) throw InvariantError("reached count exceeds the bound");
  report.complete = report.reached == report.bound;
  report.generations = state.generation;
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

bool alphabet_sufficiency(std::size_t m, std::size_t n, const std::vector<ExtremalLetter>& letters) {
  return bfs_reach(m, n, ExtremalAlphabet::letters(m, n, letters)).complete;
}

std::vector<ExtremalLetter> greedy_alphabet(std::size_t m, std::size_t n) {
  check_size(m, n, ExtremalAlphabet::full(m, n));
  const detail::GridKernel grid(m, n);
  const auto count_m = *transformation_count(m);
  const auto count_n = *transformation_count(n);
  detail::ImageTables left(m), right(n);
  for (std::uint64_t r = 0; r < count_m; ++r) left.add(transformation_at(m, r));
  for (std::uint64_t r = 0; r < count_n; ++r) right.add(transformation_at(n, r));
  const std::uint64_t total = std::uint64_t{1} << (m * n);
  const auto bound = static_cast<std::uint64_t>(bound_f(m, n));

  using Letter = std::pair<std::uint64_t, std::uint64_t>;
  auto step = [&](std::uint64_t x, Letter a) {
    return grid.step(x, left.table(a.first), right.table(a.second));
  };
  // Closes `seen` (with member list `members`) under `letters`, starting from `queue`.
  auto close = [&](std::vector<char>& seen, std::vector<std::uint64_t>& members, std::vector<std::uint64_t> queue,
                   const std::vector<Letter>& letters) {
    while (!queue.empty()) {
      const auto x = queue.back();
      queue.pop_back();
      for (const auto& a : letters) {
        const auto y = step(x, a);
        if (!seen[y]) {
          seen[y] = 1;
          members.push_back(y);
          queue.push_back(y);
        }
      }
    }
  };
  auto reach_count = [&](const std::vector<Letter>& letters) {
    std::vector<char> seen(total, 0);
    std::vector<std::uint64_t> members{1};
    seen[1] = 1;
    close(seen, members, {1}, letters);
    return members.size();
  };

  std::vector<Letter> chosen;
  std::vector<char> seen(total, 0);
  std::vector<std::uint64_t> members{1};
  seen[1] = 1;
  while (members.size() < bound) {
    std::size_t best_gain = 0;
    Letter best{};
    for (std::uint64_t s = 0; s < count_m; ++s) {
      for (std::uint64_t t = 0; t < count_n; ++t) {
        const Letter a{s, t};
        auto trial_seen = seen;
        std::vector<std::uint64_t> trial_members;
        std::vector<std::uint64_t> fresh;
        for (auto x : members) {
          const auto y = step(x, a);
          if (!trial_seen[y]) {
            trial_seen[y] = 1;
            trial_members.push_back(y);
            fresh.push_back(y);
          }
        }
        if (fresh.empty()) continue;
        chosen.push_back(a);
        close(trial_seen, trial_members, std::move(fresh), chosen);
        chosen.pop_back();
        if (trial_members.size() > best_gain) {
          best_gain = trial_members.size();
          best = a;
        }
      }
    }
    if (best_gain == 0) throw InvariantError("greedy_alphabet: no letter extends the reached set");
    chosen.push_back(best);
    close(seen, members, members, chosen);
  }

  for (std::size_t i = chosen.size(); i-- > 0;) {
    auto without = chosen;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (reach_count(without) == bound) chosen = std::move(without);
  }

  std::vector<ExtremalLetter> out;
  for (auto [s, t] : chosen) out.push_back({transformation_at(m, s), transformation_at(n, t)});
  return out;
}

}  // namespace ssc
