#pragma once

#include <span>
#include <string>
#include <string_view>

namespace ssc::detail {

std::string sha256_hex(std::span<const unsigned char> data);

inline std::string sha256_hex(std::string_view text) {
  return sha256_hex(std::span<const unsigned char>(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

}  // namespace ssc::detail
