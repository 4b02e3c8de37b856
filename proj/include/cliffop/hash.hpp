#pragma once
// FNV-1a 64-bit hashing for config/grid fingerprints.

#include <cstdint>
#include <string>

namespace cliffop {

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& s);

}  // namespace cliffop
