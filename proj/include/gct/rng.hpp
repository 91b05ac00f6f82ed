#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gct {

// All randomness in the pipeline flows from one master seed through named
// substreams so each stage (split, forest, synth, ...) can be reproduced
// independently and parallel execution cannot change results.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t substream_seed(std::uint64_t master, std::string_view name,
                                    std::uint64_t index = 0) {
  return splitmix64(splitmix64(master ^ fnv1a(name)) ^ index);
}

inline std::mt19937_64 substream(std::uint64_t master, std::string_view name,
                                 std::uint64_t index = 0) {
  return std::mt19937_64(substream_seed(master, name, index));
}

}  // namespace gct
