#pragma once

// Seed splitting and the few variate transforms the series needs.
//
// Every stream is a std::mt19937_64, whose output sequence is fixed by the
// standard. Seeds for sub-streams are derived with splitmix64 using integer
// arithmetic only, and uniforms are built from the top 53 bits of one engine
// output. Nothing here touches std::*_distribution, whose algorithms differ
// between standard libraries.

#include <cmath>
#include <cstdint>
#include <random>

namespace mstab::rng {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Child seed for sub-stream `stream` of `parent`.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(parent) ^ splitmix64(~stream));
}

/// Stream identifiers. Values are part of the reproducibility contract.
enum class Stream : std::uint64_t {
  arrivals = 1,
  points = 2,
  signs = 3,
  oracle = 4,
  path = 5,
};

constexpr std::uint64_t stream_seed(std::uint64_t seed, Stream s) noexcept {
  return derive_seed(seed, static_cast<std::uint64_t>(s));
}

/// Seed of Monte Carlo path `index`; `attempt` > 0 only after a degenerate draw.
constexpr std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index,
                                  std::uint64_t attempt = 0) noexcept {
  return derive_seed(derive_seed(stream_seed(seed, Stream::path), index), attempt);
}

inline Engine make_engine(std::uint64_t seed) { return Engine{seed}; }

/// Uniform on [0, 1).
inline double uniform01(Engine& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

/// Uniform on (0, 1).
inline double uniform_open(Engine& g) {
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

/// Exp(1) by inversion, exactly one engine call per variate; always > 0.
inline double exponential(Engine& g) { return -std::log1p(-uniform_open(g)); }

/// Fair sign, exactly one engine call per variate.
inline int rademacher(Engine& g) { return (g() >> 63) != 0 ? 1 : -1; }

}  // namespace mstab::rng
