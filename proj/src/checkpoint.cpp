#include "detail/checkpoint.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "detail/sha256.hpp"
#include "ssc/error.hpp"

namespace ssc::detail {

namespace fs = std::filesystem;

namespace {

std::string file_name(std::size_t generation) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "gen-%06zu.ckpt", generation);
  return buf;
}

std::vector<unsigned char> to_bytes(const std::vector<std::uint64_t>& words, std::size_t count) {
  std::vector<unsigned char> bytes(count, 0);
  for (std::size_t i = 0; i < count; ++i) bytes[i] = static_cast<unsigned char>(words[i / 8] >> (8 * (i % 8)));
  return bytes;
}

std::uint64_t popcount(const std::vector<std::uint64_t>& words) {
  std::uint64_t total = 0;
  for (auto w : words) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

[[noreturn]] void corrupt(const fs::path& file, const std::string& what) {
  throw CheckpointError(file.string() + ": " + what + "; refusing to resume");
}

}  // namespace

std::size_t bitmap_bytes(std::size_t m, std::size_t n) { return ((std::size_t{1} << (m * n)) + 7) / 8; }

fs::path write_checkpoint(const fs::path& dir, const CheckpointState& state) {
  fs::create_directories(dir);
  const auto bytes = to_bytes(state.visited, bitmap_bytes(state.m, state.n));
  nlohmann::json header = {
      {"m", state.m},
      {"n", state.n},
      {"alphabet_id", state.alphabet_id},
      {"generation", state.generation},
      {"visited_count", popcount(state.visited)},
      {"frontier_len", state.frontier.size()},
      {"bitmap_sha256", sha256_hex(bytes)},
  };
  const auto name = file_name(state.generation);
  const fs::path target = dir / name;
  const fs::path temp = dir / (name + ".tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError(temp.string() + ": cannot write checkpoint");
    out << header.dump() << '\n';
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    for (auto x : state.frontier) out << '\n' << x;
    if (!out) throw InputError(temp.string() + ": write failed");
  }
  fs::rename(temp, target);
  const fs::path latest_temp = dir / "LATEST.tmp";
  {
    std::ofstream out(latest_temp, std::ios::trunc);
    out << name << '\n';
    if (!out) throw InputError(latest_temp.string() + ": write failed");
  }
  fs::rename(latest_temp, dir / "LATEST");
  return target;
}

CheckpointState read_checkpoint(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw CheckpointError(file.string() + ": cannot open checkpoint");
  std::string line;
  if (!std::getline(in, line)) corrupt(file, "missing header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    corrupt(file, std::string("unreadable header: ") + e.what());
  }
  CheckpointState state;
  std::uint64_t visited_count = 0;
  std::size_t frontier_len = 0;
  std::string digest;
  try {
    state.m = header.at("m").get<std::size_t>();
    state.n = header.at("n").get<std::size_t>();
    state.alphabet_id = header.at("alphabet_id").get<std::string>();
    state.generation = header.at("generation").get<std::size_t>();
    visited_count = header.at("visited_count").get<std::uint64_t>();
    frontier_len = header.at("frontier_len").get<std::size_t>();
    digest = header.at("bitmap_sha256").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    corrupt(file, std::string("bad header: ") + e.what());
  }
  if (state.m == 0 || state.n == 0 || state.m * state.n > 40) corrupt(file, "implausible grid size");

  const std::size_t count = bitmap_bytes(state.m, state.n);
  std::vector<unsigned char> bytes(count);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count) corrupt(file, "truncated bitmap");
  if (sha256_hex(bytes) != digest) corrupt(file, "bitmap hash mismatch");

  state.visited.assign((count + 7) / 8, 0);
  for (std::size_t i = 0; i < count; ++i) state.visited[i / 8] |= std::uint64_t{bytes[i]} << (8 * (i % 8));
  if (popcount(state.visited) != visited_count) corrupt(file, "visited count mismatch");

  const std::uint64_t limit = std::uint64_t{1} << (state.m * state.n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), x);
    if (ec != std::errc() || ptr != line.data() + line.size() || x >= limit) corrupt(file, "bad frontier entry");
    if (!((state.visited[x / 64] >> (x % 64)) & 1U)) corrupt(file, "frontier entry not marked visited");
    state.frontier.push_back(x);
  }
  if (state.frontier.size() != frontier_len) corrupt(file, "frontier length mismatch");
  return state;
}

CheckpointState read_latest_checkpoint(const fs::path& dir, std::size_t m, std::size_t n,
                                       const std::string& alphabet_id) {
  std::ifstream latest(dir / "LATEST");
  if (!latest) throw CheckpointError((dir / "LATEST").string() + ": no checkpoint to resume from");
  std::string name;
  std::getline(latest, name);
  if (name.empty() || name.find('/') != std::string::npos) corrupt(dir / "LATEST", "bad pointer");
  auto state = read_checkpoint(dir / name);
  if (state.m != m || state.n != n) {
    corrupt(dir / name, "checkpoint is for " + std::to_string(state.m) + "x" + std::to_string(state.n));
  }
  if (state.alphabet_id != alphabet_id) corrupt(dir / name, "checkpoint alphabet differs");
  return state;
}

}  // namespace ssc::detail
