#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace commaware {

using AgentId = std::uint32_t;
using Timestep = std::int64_t;

/// Belief over the dominant feature, always 0 or 1.
using Belief = int;

using Rng = std::mt19937_64;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double norm(Vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based child seed: distinct `stream` values give independent
/// streams of the same parent.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) {
  return mix64(mix64(parent) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

// Named stream tags so sub-streams of one replicate never collide.
namespace stream {
inline constexpr std::uint64_t environment = 0x656E76;
inline constexpr std::uint64_t comms = 0x636F6D;
inline constexpr std::uint64_t placement = 0x706C63;
inline constexpr std::uint64_t agent_base = 0x1000000;
}  // namespace stream

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// Success with probability p; p = 0 never succeeds, p = 1 always does.
inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace commaware
