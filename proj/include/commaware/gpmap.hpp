#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "commaware/core.hpp"

namespace commaware {

struct KernelParams {
  double nu = 1.5;  // one of 0.5, 1.5, 2.5
  double length_scale = 10.0;
  double jitter = 1e-6;

  void validate() const;
};

/// Unit-variance Matern covariance between two points (closed forms for
/// half-integer smoothness).
double matern(Vec2 a, Vec2 b, const KernelParams& params);
double matern_at_distance(double d, const KernelParams& params);

/// Capacity-bounded observation set that, once full, only accepts points
/// improving spatial coverage. min_dists()[k] is the distance from point k to
/// its nearest other stored point (+inf for a lone point).
class ObservationStore {
 public:
  explicit ObservationStore(std::size_t capacity = 100);

  /// Appends below capacity (exact duplicate positions are rejected).
  /// At capacity, p replaces a uniformly drawn argmin of min_dists() iff its
  /// distance to the nearest stored point exceeds min(min_dists()).
  /// `rng` is consumed only when a replacement happens.
  bool try_insert(Vec2 p, double q, Timestep t, Rng& rng);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::size_t capacity() const { return capacity_; }
  std::span<const Vec2> points() const { return points_; }
  std::span<const double> values() const { return values_; }
  std::span<const Timestep> times() const { return times_; }
  std::span<const double> min_dists() const { return min_dists_; }

  /// Bumped on every successful insertion.
  std::uint64_t version() const { return version_; }

 private:
  void recompute_min_dists();

  std::size_t capacity_;
  std::vector<Vec2> points_;
  std::vector<double> values_;
  std::vector<Timestep> times_;
  std::vector<double> min_dists_;
  std::uint64_t version_ = 0;
};

struct Prediction {
  std::vector<double> mean;  // q-hat, clamped to [0,1]
  std::vector<double> sd;    // posterior sd / prior sd, in [0,1]
};

/// Noise-free GP posterior over link quality, centred on a constant prior
/// mean. A default-constructed model is unfitted and throws on prediction.
class GpModel {
 public:
  static constexpr double kPriorMean = 0.5;

  GpModel() = default;

  /// Throws std::invalid_argument on an empty store and std::runtime_error
  /// when K + jitter*I is not positive definite.
  static GpModel fit(const ObservationStore& store, const KernelParams& params, double prior_mean = kPriorMean);

  /// Data-free model returning the prior everywhere (used before the first
  /// observation is stored).
  static GpModel prior(const KernelParams& params, double prior_mean = kPriorMean);

  bool fitted() const { return fitted_; }
  std::size_t training_size() const { return static_cast<std::size_t>(points_.size()); }

  Prediction predict(std::span<const Vec2> queries) const;
  double mean_at(Vec2 q) const;
  double sd_at(Vec2 q) const;

 private:
  void require_fitted() const;
  Eigen::VectorXd cross_covariance(Vec2 q) const;

  bool fitted_ = false;
  KernelParams params_;
  double prior_mean_ = kPriorMean;
  std::vector<Vec2> points_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

/// CSV dump: one header row with kernel params, then x,y,q,t per observation.
void dump_model(std::ostream& os, const ObservationStore& store, const KernelParams& params);

}  // namespace commaware
