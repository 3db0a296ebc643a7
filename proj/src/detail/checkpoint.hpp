#pragma once

// On-disk BFS checkpoints: gen-%06d.ckpt files plus a LATEST pointer file.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ssc::detail {

struct CheckpointState {
  std::size_t m = 0;
  std::size_t n = 0;
  std::string alphabet_id;
  std::size_t generation = 0;
  std::vector<std::uint64_t> visited;  // 2^{mn} bits, little-endian words
  std::vector<std::uint64_t> frontier;
};

std::size_t bitmap_bytes(std::size_t m, std::size_t n);

/// Writes gen-<generation>.ckpt and then repoints LATEST at it.
std::filesystem::path write_checkpoint(const std::filesystem::path& dir, const CheckpointState& state);

/// Loads the checkpoint named by LATEST, checking the header against the
/// expected instance and the bitmap against its hash.
CheckpointState read_latest_checkpoint(const std::filesystem::path& dir, std::size_t m, std::size_t n,
                                       const std::string& alphabet_id);

CheckpointState read_checkpoint(const std::filesystem::path& file);

}  // namespace ssc::detail
