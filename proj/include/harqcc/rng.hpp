#pragma once

#include <cstdint>

namespace harqcc {

// Stateless counter-based generator built on the splitmix64 finalizer.
// Every (seed, stream, index) triple maps to one fixed output, independent of
// call order, so Monte Carlo runs reproduce bit-identically under any thread
// count or scheduling.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t index) noexcept {
  return mix64(mix64(seed ^ (stream * 0x9e3779b97f4a7c15ull)) ^ index);
}

// Uniform on the open interval (0,1); never returns an endpoint, so it is
// safe under log().
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t index) noexcept {
  const std::uint64_t bits = counter_hash(seed, stream, index);
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace harqcc
