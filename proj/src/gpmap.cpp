#include "commaware/gpmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace commaware {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void KernelParams::validate() const {
  if (nu != 0.5 && nu != 1.5 && nu != 2.5) throw std::invalid_argument("nu must be one of 0.5, 1.5, 2.5");
  if (!(length_scale > 0.0)) throw std::invalid_argument("length_scale must be > 0");
  if (!(jitter > 0.0 && jitter <= 1e-4)) throw std::invalid_argument("jitter must be in (0, 1e-4]");
}

double matern_at_distance(double d, const KernelParams& params) {
  const double r = d / params.length_scale;
  if (params.nu == 0.5) return std::exp(-r);
  if (params.nu == 1.5) {
    const double s = std::sqrt(3.0) * r;
    return (1.0 + s) * std::exp(-s);
  }
  const double s = std::sqrt(5.0) * r;
  return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

double matern(Vec2 a, Vec2 b, const KernelParams& params) { return matern_at_distance(distance(a, b), params); }

ObservationStore::ObservationStore(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("store capacity must be >= 1");
  points_.reserve(capacity_);
  values_.reserve(capacity_);
  times_.reserve(capacity_);
  min_dists_.reserve(capacity_);
}

bool ObservationStore::try_insert(Vec2 p, double q, Timestep t, Rng& rng) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("observation value must be in [0,1]");

  double nearest = kInf;
  for (const Vec2& s : points_) nearest = std::min(nearest, distance(p, s));

  if (points_.size() < capacity_) {
    if (nearest == 0.0) return false;
    for (std::size_t k = 0; k < points_.size(); ++k) min_dists_[k] = std::min(min_dists_[k], distance(p, points_[k]));
    points_.push_back(p);
    values_.push_back(q);
    times_.push_back(t);
    min_dists_.push_back(nearest);
    ++version_;
    return true;
  }

  const double floor_dist = *std::min_element(min_dists_.begin(), min_dists_.end());
  if (!(nearest > floor_dist)) return false;

  std::vector<std::size_t> ties;
  for (std::size_t k = 0; k < min_dists_.size(); ++k)
    if (min_dists_[k] == floor_dist) ties.push_back(k);
  const std::size_t victim = ties[uniform_index(rng, ties.size())];
  points_[victim] = p;
  values_[victim] = q;
  times_[victim] = t;
  recompute_min_dists();
  ++version_;
  return true;
}

void ObservationStore::recompute_min_dists() {
  const std::size_t n = points_.size();
  min_dists_.assign(n, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(points_[i], points_[j]);
      min_dists_[i] = std::min(min_dists_[i], d);
      min_dists_[j] = std::min(min_dists_[j], d);
    }
  }
}

GpModel GpModel::fit(const ObservationStore& store, const KernelParams& params, double prior_mean) {
  params.validate();
  if (store.empty()) throw std::invalid_argument("cannot fit a GP to an empty store");

  GpModel model;
  model.params_ = params;
  model.prior_mean_ = prior_mean;
  model.points_.assign(store.points().begin(), store.points().end());

  const auto n = static_cast<Eigen::Index>(model.points_.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0 + params.jitter;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = matern(model.points_[i], model.points_[j], params);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  model.llt_.compute(k);
  if (model.llt_.info() != Eigen::Success)
    throw std::runtime_error("covariance matrix not positive definite (duplicate points or bad kernel params?)");

  Eigen::VectorXd centred(n);
  for (Eigen::Index i = 0; i < n; ++i) centred(i) = store.values()[static_cast<std::size_t>(i)] - prior_mean;
  model.alpha_ = model.llt_.solve(centred);
  model.fitted_ = true;
  return model;
}

GpModel GpModel::prior(const KernelParams& params, double prior_mean) {
  params.validate();
  GpModel model;
  model.params_ = params;
  model.prior_mean_ = prior_mean;
  model.fitted_ = true;
  return model;
}

void GpModel::require_fitted() const {
  if (!fitted_) throw std::logic_error("GP model used before fit");
}

Eigen::VectorXd GpModel::cross_covariance(Vec2 q) const {
  Eigen::VectorXd ks(static_cast<Eigen::Index>(points_.size()));
  for (std::size_t i = 0; i < points_.size(); ++i) ks(static_cast<Eigen::Index>(i)) = matern(q, points_[i], params_);
  return ks;
}

double GpModel::mean_at(Vec2 q) const {
  require_fitted();
  if (points_.empty()) return prior_mean_;
  return std::clamp(prior_mean_ + cross_covariance(q).dot(alpha_), 0.0, 1.0);
}

double GpModel::sd_at(Vec2 q) const {
  require_fitted();
  if (points_.empty()) return 1.0;
  const Eigen::VectorXd v = llt_.matrixL().solve(cross_covariance(q));
  // Prior variance k(q,q) is 1, so this is already normalised.
  return std::sqrt(std::clamp(1.0 - v.squaredNorm(), 0.0, 1.0));
}

Prediction GpModel::predict(std::span<const Vec2> queries) const {
  require_fitted();
  Prediction out;
  out.mean.resize(queries.size());
  out.sd.resize(queries.size());
  if (points_.empty()) {
    std::fill(out.mean.begin(), out.mean.end(), prior_mean_);
    std::fill(out.sd.begin(), out.sd.end(), 1.0);
    return out;
  }
  const auto n = static_cast<Eigen::Index>(points_.size());
  const auto m = static_cast<Eigen::Index>(queries.size());
  Eigen::MatrixXd ks(n, m);
  for (Eigen::Index c = 0; c < m; ++c) ks.col(c) = cross_covariance(queries[static_cast<std::size_t>(c)]);
  const Eigen::VectorXd mean = ks.transpose() * alpha_;
  llt_.matrixL().solveInPlace(ks);
  for (Eigen::Index c = 0; c < m; ++c) {
    const auto i = static_cast<std::size_t>(c);
    out.mean[i] = std::clamp(prior_mean_ + mean(c), 0.0, 1.0);
    out.sd[i] = std::sqrt(std::clamp(1.0 - ks.col(c).squaredNorm(), 0.0, 1.0));
  }
  return out;
}

void dump_model(std::ostream& os, const ObservationStore& store, const KernelParams& params) {
  os << "# nu=" << params.nu << ",length_scale=" << params.length_scale << ",jitter=" << params.jitter
     << ",prior_mean=" << GpModel::kPriorMean << '\n';
  os << "x,y,q,t\n";
  for (std::size_t k = 0; k < store.size(); ++k)
    os << store.points()[k].x << ',' << store.points()[k].y << ',' << store.values()[k] << ',' << store.times()[k]
       << '\n';
}

}  // namespace commaware
