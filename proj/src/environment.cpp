#include "commaware/environment.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace commaware {

namespace {

constexpr double kDeniedTolerance = 0.02;
constexpr double kMaxPatchOverlap = 0.5;
constexpr int kMaxLayoutAttempts = 50;
constexpr int kMaxPatchTries = 20000;

std::size_t cell_count(int size) { return static_cast<std::size_t>(size) * static_cast<std::size_t>(size); }

Vec2 cell_center(int ix, int iy) { return {ix + 0.5, iy + 0.5}; }

// Cells whose centres lie within `radius` of `center`, clipped to the arena.
std::vector<std::size_t> disk_cells(int size, Vec2 center, double radius) {
  std::vector<std::size_t> out;
  const int x0 = std::max(0, static_cast<int>(std::floor(center.x - radius)));
  const int x1 = std::min(size - 1, static_cast<int>(std::ceil(center.x + radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(center.y - radius)));
  const int y1 = std::min(size - 1, static_cast<int>(std::ceil(center.y + radius)));
  const double r2 = radius * radius;
  for (int iy = y0; iy <= y1; ++iy) {
    for (int ix = x0; ix <= x1; ++ix) {
      const Vec2 d = cell_center(ix, iy) - center;
      if (d.x * d.x + d.y * d.y <= r2) out.push_back(static_cast<std::size_t>(iy) * size + ix);
    }
  }
  return out;
}

std::vector<bool> continuous_mask(const EnvConfig& config, Rng& rng, std::size_t target) {
  const int n = config.size;
  const Vec2 center{uniform01(rng) * n, uniform01(rng) * n};
  std::vector<std::pair<double, std::size_t>> by_distance;
  by_distance.reserve(cell_count(n));
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const Vec2 d = cell_center(ix, iy) - center;
      by_distance.emplace_back(d.x * d.x + d.y * d.y, static_cast<std::size_t>(iy) * n + ix);
    }
  }
  // The `target` cells closest to the centre form a disk clipped by the arena,
  // grown exactly until it covers r_c of the cells.
  std::partial_sort(by_distance.begin(), by_distance.begin() + static_cast<std::ptrdiff_t>(target), by_distance.end());
  std::vector<bool> mask(cell_count(n), false);
  for (std::size_t k = 0; k < target; ++k) mask[by_distance[k].second] = true;
  return mask;
}

std::vector<bool> distributed_mask(const EnvConfig& config, Rng& rng, std::size_t target) {
  const int n = config.size;
  const std::size_t total = cell_count(n);
  const auto tolerance = static_cast<std::size_t>(std::floor(kDeniedTolerance * static_cast<double>(total)));
  const std::size_t lower = target > tolerance ? target - tolerance : 0;

  for (int layout = 0; layout < kMaxLayoutAttempts; ++layout) {
    std::vector<bool> mask(total, false);
    std::size_t denied = 0;
    int patches = 0;
    for (int tries = 0; tries < kMaxPatchTries && denied < target; ++tries) {
      if (config.patch_count > 0 && patches >= config.patch_count) break;
      const Vec2 center{uniform01(rng) * n, uniform01(rng) * n};
      const auto cells = disk_cells(n, center, config.patch_radius);
      if (cells.empty()) continue;
      std::size_t fresh = 0;
      for (auto c : cells) fresh += mask[c] ? 0 : 1;
      const double overlap = 1.0 - static_cast<double>(fresh) / static_cast<double>(cells.size());
      if (overlap > kMaxPatchOverlap) continue;
      if (denied + fresh > target + tolerance) continue;
      for (auto c : cells) mask[c] = true;
      denied += fresh;
      ++patches;
    }
    if (denied >= lower && denied <= target + tolerance) return mask;
  }
  std::ostringstream msg;
  msg << "distributed layout cannot reach r_c=" << config.denial_ratio << " with patch_radius=" << config.patch_radius
      << " and patch_count=" << config.patch_count;
  throw std::runtime_error(msg.str());
}

std::size_t checked_index(int size, Vec2 pos) {
  if (!(pos.x >= 0.0 && pos.y >= 0.0 && pos.x < size && pos.y < size)) {
    std::ostringstream msg;
    msg << "position (" << pos.x << ", " << pos.y << ") outside arena [0, " << size << ")^2";
    throw std::out_of_range(msg.str());
  }
  const int ix = static_cast<int>(pos.x);
  const int iy = static_cast<int>(pos.y);
  return static_cast<std::size_t>(iy) * static_cast<std::size_t>(size) + static_cast<std::size_t>(ix);
}

}  // namespace

std::string_view to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::distributed: return "distributed";
    case EnvKind::continuous: return "continuous";
    case EnvKind::uniform: return "uniform";
  }
  return "?";
}

EnvKind parse_env_kind(std::string_view text) {
  if (text == "distributed") return EnvKind::distributed;
  if (text == "continuous") return EnvKind::continuous;
  if (text == "uniform") return EnvKind::uniform;
  throw std::invalid_argument("env kind must be one of uniform|continuous|distributed, got '" + std::string(text) + "'");
}

void EnvConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (size < 2) fail("size must be >= 2");
  if (!(feature_ratio > 0.0 && feature_ratio < 1.0)) fail("r_f must be in (0,1)");
  if (!(denial_ratio >= 0.0 && denial_ratio < 1.0)) fail("r_c must be in [0,1)");
  if (!(gradient_width >= 0.0)) fail("gradient_width must be >= 0");
  if (patch_count < 0) fail("patch_count must be >= 0");
  if (patch_radius < 1) fail("patch_radius must be >= 1");
  if (feature_count != 2) fail("feature_count must be 2");
  if (kind == EnvKind::uniform && denial_ratio != 0.0) fail("r_c must be 0 for the uniform environment kind");
}

FeatureGrid generate_feature_grid(const EnvConfig& config, Rng& rng) {
  config.validate();
  const std::size_t total = cell_count(config.size);
  const auto ones = static_cast<std::size_t>(std::llround(config.feature_ratio * static_cast<double>(total)));
  FeatureGrid grid(config.size, 0);
  auto& cells = grid.cells();
  std::fill_n(cells.begin(), ones, std::uint8_t{1});
  std::shuffle(cells.begin(), cells.end(), rng);
  return grid;
}

CommGrid generate_comm_grid(const EnvConfig& config, Rng& rng) {
  config.validate();
  const int n = config.size;
  const std::size_t total = cell_count(n);
  CommGrid grid(n, 1.0);
  const auto target = static_cast<std::size_t>(std::llround(config.denial_ratio * static_cast<double>(total)));
  if (config.kind == EnvKind::uniform || target == 0) return grid;

  const std::vector<bool> mask =
      config.kind == EnvKind::continuous ? continuous_mask(config, rng, target) : distributed_mask(config, rng, target);

  std::vector<Vec2> denied;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      if (mask[grid.index(ix, iy)]) denied.push_back(cell_center(ix, iy));

  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      double& q = grid.at(ix, iy);
      if (mask[grid.index(ix, iy)]) {
        q = 0.0;
        continue;
      }
      if (config.gradient_width <= 0.0) continue;
      const Vec2 c = cell_center(ix, iy);
      double best = std::numeric_limits<double>::infinity();
      for (const Vec2& d : denied) {
        const Vec2 v = c - d;
        best = std::min(best, v.x * v.x + v.y * v.y);
      }
      q = std::clamp(std::sqrt(best) / config.gradient_width, 0.0, 1.0);
    }
  }
  return grid;
}

int feature_at(const FeatureGrid& grid, Vec2 pos) { return grid.cells()[checked_index(grid.size(), pos)]; }

double quality_at(const CommGrid& grid, Vec2 pos) { return grid.cells()[checked_index(grid.size(), pos)]; }

std::size_t count_denied(const CommGrid& grid) {
  return static_cast<std::size_t>(std::count(grid.cells().begin(), grid.cells().end(), 0.0));
}

void write_grid_file(std::ostream& os, const GridFileHeader& header, const std::vector<double>& values) {
  if (values.size() != cell_count(header.size)) throw std::invalid_argument("grid value count does not match size");
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  os << "layer,size,kind,r_f,r_c,seed\n"
     << header.layer << ',' << header.size << ',' << to_string(header.kind) << ',' << header.feature_ratio << ','
     << header.denial_ratio << ',' << header.seed << '\n';
  for (int iy = 0; iy < header.size; ++iy) {
    for (int ix = 0; ix < header.size; ++ix) {
      if (ix) os << ',';
      os << values[static_cast<std::size_t>(iy) * header.size + ix];
    }
    os << '\n';
  }
  os.precision(old_precision);
}

void write_grid_file(std::ostream& os, const EnvConfig& config, std::uint64_t seed, const FeatureGrid& grid) {
  std::vector<double> values(grid.cells().begin(), grid.cells().end());
  write_grid_file(os, {"feature", grid.size(), config.kind, config.feature_ratio, config.denial_ratio, seed}, values);
}

void write_grid_file(std::ostream& os, const EnvConfig& config, std::uint64_t seed, const CommGrid& grid) {
  write_grid_file(os, {"comm", grid.size(), config.kind, config.feature_ratio, config.denial_ratio, seed}, grid.cells());
}

GridFileHeader read_grid_file(std::istream& is, std::vector<double>& values) {
  std::string line;
  if (!std::getline(is, line) || line != "layer,size,kind,r_f,r_c,seed") throw std::runtime_error("bad grid file header");
  if (!std::getline(is, line)) throw std::runtime_error("missing grid header values");
  std::vector<std::string> fields;
  {
    std::istringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
  }
  if (fields.size() != 6) throw std::runtime_error("grid header must have 6 fields");
  GridFileHeader header;
  header.layer = fields[0];
  header.size = std::stoi(fields[1]);
  header.kind = parse_env_kind(fields[2]);
  header.feature_ratio = std::stod(fields[3]);
  header.denial_ratio = std::stod(fields[4]);
  header.seed = std::stoull(fields[5]);
  if (header.size < 1) throw std::runtime_error("grid size must be positive");

  values.clear();
  values.reserve(cell_count(header.size));
  for (int iy = 0; iy < header.size; ++iy) {
    if (!std::getline(is, line)) throw std::runtime_error("grid file truncated");
    std::istringstream ss(line);
    std::string f;
    int count = 0;
    while (std::getline(ss, f, ',')) {
      values.push_back(std::stod(f));
      ++count;
    }
    if (count != header.size) throw std::runtime_error("grid row " + std::to_string(iy) + " has wrong width");
  }
  return header;
}

}  // namespace commaware
