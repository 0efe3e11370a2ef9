#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "commaware/core.hpp"
#include "commaware/gpmap.hpp"

namespace commaware {

enum class PlannerKind { RB, CA_G, CA_Co };
enum class ExploreReward { as_written, high_uncertainty };

std::string_view to_string(PlannerKind k);
PlannerKind parse_planner(std::string_view text);
std::string_view to_string(ExploreReward r);
ExploreReward parse_explore_reward(std::string_view text);

struct Target {
  Vec2 point;
  Timestep issued_at = 0;
};

/// Axis-aligned sub-square of the planning window. `centroid` is the
/// centroid of its in-arena part (clamped into the arena when the area lies
/// entirely outside).
struct Area {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  Vec2 centroid;
  /// In-arena unit cells overlapping [x0,x1) x [y0,y1), each weighted by the
  /// fraction of the cell the area covers.
  struct Cell {
    int ix = 0;
    int iy = 0;
    double weight = 0.0;
  };
  std::vector<Cell> cells;
};

/// Square window of side `side` centred on the agent, split into
/// `area_count` equal sub-squares ordered row-major from the lowest (x, y).
class PlanWindow {
 public:
  PlanWindow(Vec2 center, double side, int area_count, int arena_size);

  std::span<const Area> areas() const { return areas_; }
  std::vector<Vec2> centroids() const;
  Vec2 center() const { return center_; }

 private:
  Vec2 center_;
  std::vector<Area> areas_;
};

/// Lazily memoised per-cell posterior over the arena for one fitted model
/// (which it owns).
class CellMap {
 public:
  CellMap(GpModel model, int arena_size);

  double mean(int ix, int iy);
  double sd(int ix, int iy);
  const GpModel& model() const { return model_; }

 private:
  GpModel model_;
  int size_;
  std::vector<double> mean_;
  std::vector<double> sd_;
};

/// Sum of q-hat over each area's cells (coverage weighted).
std::vector<double> area_rewards_dissemination(const PlanWindow& window, CellMap& map);
/// Sum of 1 - sd (as_written) or sd (high_uncertainty) over each area's cells.
std::vector<double> area_rewards_exploration(const PlanWindow& window, CellMap& map,
                                             ExploreReward mode = ExploreReward::as_written);

std::vector<double> area_rewards_dissemination(const PlanWindow& window, const GpModel& model, int arena_size);
std::vector<double> area_rewards_exploration(const PlanWindow& window, const GpModel& model, int arena_size,
                                             ExploreReward mode = ExploreReward::as_written);

/// Argmax area, ties to the lowest index.
std::size_t select_greedy_index(std::span<const double> rewards);
Target select_greedy(std::span<const double> rewards, std::span<const Vec2> centroids, Timestep now = 0);

/// Reward shares s_n = R_n / sum R; uniform when the total is zero.
std::vector<double> reward_shares(std::span<const double> rewards);
std::size_t select_weighted_index(std::span<const double> rewards, Rng& rng);
Target select_weighted(std::span<const double> rewards, std::span<const Vec2> centroids, Rng& rng, Timestep now = 0);

/// Random-walk leg: a uniform heading, `leg` units long, clipped to the
/// arena. Headings whose clipped leg is shorter than `min_leg` are redrawn
/// so an agent pressed against a wall still moves inward.
Target random_target(Vec2 pos, double leg, int arena_size, Rng& rng, Timestep now = 0, double min_leg = 0.5);

/// Heading in [0, 2pi) drawn for a random leg (exposed for tests).
double random_heading(Rng& rng);

}  // namespace commaware
