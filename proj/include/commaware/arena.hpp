#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "commaware/core.hpp"

namespace commaware {

/// Largest coordinate that still maps to a cell of an arena of side `size`.
inline double arena_limit(int size) { return std::nextafter(static_cast<double>(size), 0.0); }

inline Vec2 clamp_to_arena(Vec2 p, int size) {
  const double hi = arena_limit(size);
  return {std::clamp(p.x, 0.0, hi), std::clamp(p.y, 0.0, hi)};
}

/// End point of the ray pos + t*dir, t in [0, length], stopped at the arena
/// boundary. `dir` must be a unit vector.
inline Vec2 clip_ray_to_arena(Vec2 pos, Vec2 dir, double length, int size) {
  const double hi = arena_limit(size);
  double t = length;
  if (dir.x > 0) t = std::min(t, (hi - pos.x) / dir.x);
  if (dir.x < 0) t = std::min(t, -pos.x / dir.x);
  if (dir.y > 0) t = std::min(t, (hi - pos.y) / dir.y);
  if (dir.y < 0) t = std::min(t, -pos.y / dir.y);
  t = std::max(t, 0.0);
  return clamp_to_arena(pos + t * dir, size);
}

}  // namespace commaware
