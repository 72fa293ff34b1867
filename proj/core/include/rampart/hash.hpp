#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace rampart {

inline uint64_t fnv1a64(std::span<const uint8_t> bytes, uint64_t h = 1469598103934665603ULL) {
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

inline uint64_t fnv1a64(std::string_view s, uint64_t h = 1469598103934665603ULL) {
  return fnv1a64(std::span<const uint8_t>(
                     reinterpret_cast<const uint8_t*>(s.data()), s.size()),
                 h);
}

std::string hash_hex(uint64_t h);

}  // namespace rampart
