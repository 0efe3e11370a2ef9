#include "commaware/planning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "commaware/arena.hpp"

namespace commaware {

std::string_view to_string(PlannerKind k) {
  switch (k) {
    case PlannerKind::RB: return "RB";
    case PlannerKind::CA_G: return "CA-G";
    case PlannerKind::CA_Co: return "CA-Co";
  }
  return "?";
}

PlannerKind parse_planner(std::string_view text) {
  if (text == "RB") return PlannerKind::RB;
  if (text == "CA-G") return PlannerKind::CA_G;
  if (text == "CA-Co") return PlannerKind::CA_Co;
  throw std::invalid_argument("planner must be one of RB|CA-G|CA-Co, got '" + std::string(text) + "'");
}

std::string_view to_string(ExploreReward r) {
  return r == ExploreReward::as_written ? "as_written" : "high_uncertainty";
}

ExploreReward parse_explore_reward(std::string_view text) {
  if (text == "as_written") return ExploreReward::as_written;
  if (text == "high_uncertainty") return ExploreReward::high_uncertainty;
  throw std::invalid_argument("explore_reward must be as_written|high_uncertainty, got '" + std::string(text) + "'");
}

PlanWindow::PlanWindow(Vec2 center, double side, int area_count, int arena_size) : center_(center) {
  const int per_side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(area_count))));
  if (area_count < 1 || per_side * per_side != area_count)
    throw std::invalid_argument("area_count must be a perfect square");
  if (!(side > 0.0)) throw std::invalid_argument("window side must be > 0");

  const double step = side / per_side;
  const double left = center.x - side / 2.0;
  const double bottom = center.y - side / 2.0;
  areas_.reserve(static_cast<std::size_t>(area_count));
  for (int row = 0; row < per_side; ++row) {
    for (int col = 0; col < per_side; ++col) {
      Area a;
      a.x0 = left + col * step;
      a.x1 = left + (col + 1) * step;
      a.y0 = bottom + row * step;
      a.y1 = bottom + (row + 1) * step;

      const double cx0 = std::max(a.x0, 0.0), cx1 = std::min(a.x1, static_cast<double>(arena_size));
      const double cy0 = std::max(a.y0, 0.0), cy1 = std::min(a.y1, static_cast<double>(arena_size));
      if (cx0 < cx1 && cy0 < cy1) {
        a.centroid = clamp_to_arena({(cx0 + cx1) / 2.0, (cy0 + cy1) / 2.0}, arena_size);
      } else {
        a.centroid = clamp_to_arena({(a.x0 + a.x1) / 2.0, (a.y0 + a.y1) / 2.0}, arena_size);
      }

      const int ix_lo = std::max(0, static_cast<int>(std::floor(a.x0)));
      const int ix_hi = std::min(arena_size - 1, static_cast<int>(std::ceil(a.x1)) - 1);
      const int iy_lo = std::max(0, static_cast<int>(std::floor(a.y0)));
      const int iy_hi = std::min(arena_size - 1, static_cast<int>(std::ceil(a.y1)) - 1);
      for (int iy = iy_lo; iy <= iy_hi; ++iy) {
        const double wy = std::min(a.y1, iy + 1.0) - std::max(a.y0, static_cast<double>(iy));
        if (wy <= 0.0) continue;
        for (int ix = ix_lo; ix <= ix_hi; ++ix) {
          const double wx = std::min(a.x1, ix + 1.0) - std::max(a.x0, static_cast<double>(ix));
          if (wx > 0.0) a.cells.push_back({ix, iy, wx * wy});
        }
      }
      areas_.push_back(std::move(a));
    }
  }
}

std::vector<Vec2> PlanWindow::centroids() const {
  std::vector<Vec2> out;
  out.reserve(areas_.size());
  for (const auto& a : areas_) out.push_back(a.centroid);
  return out;
}

CellMap::CellMap(GpModel model, int arena_size)
    : model_(std::move(model)),
      size_(arena_size),
      mean_(static_cast<std::size_t>(arena_size) * arena_size, std::numeric_limits<double>::quiet_NaN()),
      sd_(mean_) {
  if (!model_.fitted()) throw std::logic_error("GP model used before fit");
}

double CellMap::mean(int ix, int iy) {
  double& slot = mean_[static_cast<std::size_t>(iy) * size_ + ix];
  if (std::isnan(slot)) slot = model_.mean_at({ix + 0.5, iy + 0.5});
  return slot;
}

double CellMap::sd(int ix, int iy) {
  double& slot = sd_[static_cast<std::size_t>(iy) * size_ + ix];
  if (std::isnan(slot)) slot = model_.sd_at({ix + 0.5, iy + 0.5});
  return slot;
}

std::vector<double> area_rewards_dissemination(const PlanWindow& window, CellMap& map) {
  std::vector<double> out;
  for (const auto& a : window.areas()) {
    double sum = 0.0;
    for (const auto& c : a.cells) sum += c.weight * map.mean(c.ix, c.iy);
    out.push_back(sum);
  }
  return out;
}

std::vector<double> area_rewards_exploration(const PlanWindow& window, CellMap& map, ExploreReward mode) {
  std::vector<double> out;
  for (const auto& a : window.areas()) {
    double sum = 0.0;
    for (const auto& c : a.cells) {
      const double sd = map.sd(c.ix, c.iy);
      sum += c.weight * (mode == ExploreReward::as_written ? 1.0 - sd : sd);
    }
    out.push_back(sum);
  }
  return out;
}

std::vector<double> area_rewards_dissemination(const PlanWindow& window, const GpModel& model, int arena_size) {
  CellMap map(model, arena_size);
  return area_rewards_dissemination(window, map);
}

std::vector<double> area_rewards_exploration(const PlanWindow& window, const GpModel& model, int arena_size,
                                             ExploreReward mode) {
  CellMap map(model, arena_size);
  return area_rewards_exploration(window, map, mode);
}

std::size_t select_greedy_index(std::span<const double> rewards) {
  if (rewards.empty()) throw std::invalid_argument("no areas to select from");
  std::size_t best = 0;
  for (std::size_t k = 1; k < rewards.size(); ++k)
    if (rewards[k] > rewards[best]) best = k;
  return best;
}

Target select_greedy(std::span<const double> rewards, std::span<const Vec2> centroids, Timestep now) {
  if (rewards.size() != centroids.size()) throw std::invalid_argument("rewards/centroids size mismatch");
  return {centroids[select_greedy_index(rewards)], now};
}

std::vector<double> reward_shares(std::span<const double> rewards) {
  if (rewards.empty()) throw std::invalid_argument("no areas to select from");
  double total = 0.0;
  for (double r : rewards) {
    if (r < 0.0) throw std::invalid_argument("rewards must be non-negative");
    total += r;
  }
  std::vector<double> shares(rewards.size(), 1.0 / static_cast<double>(rewards.size()));
  if (total > 0.0)
    for (std::size_t k = 0; k < rewards.size(); ++k) shares[k] = rewards[k] / total;
  return shares;
}

std::size_t select_weighted_index(std::span<const double> rewards, Rng& rng) {
  const auto shares = reward_shares(rewards);
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < shares.size(); ++k) {
    acc += shares[k];
    if (u < acc && shares[k] > 0.0) return k;
  }
  // Rounding left u above the running sum; take the last positive share.
  for (std::size_t k = shares.size(); k-- > 0;)
    if (shares[k] > 0.0) return k;
  return shares.size() - 1;
}

Target select_weighted(std::span<const double> rewards, std::span<const Vec2> centroids, Rng& rng, Timestep now) {
  if (rewards.size() != centroids.size()) throw std::invalid_argument("rewards/centroids size mismatch");
  return {centroids[select_weighted_index(rewards, rng)], now};
}

double random_heading(Rng& rng) { return uniform01(rng) * 2.0 * std::numbers::pi; }

Target random_target(Vec2 pos, double leg, int arena_size, Rng& rng, Timestep now, double min_leg) {
  constexpr int kMaxDraws = 256;
  Vec2 best = pos;
  double best_len = -1.0;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    const double heading = random_heading(rng);
    const Vec2 end = clip_ray_to_arena(pos, {std::cos(heading), std::sin(heading)}, leg, arena_size);
    const double len = distance(pos, end);
    if (len > min_leg) return {end, now};
    if (len > best_len) {
      best_len = len;
      best = end;
    }
  }
  return {best, now};
}

}  // namespace commaware
