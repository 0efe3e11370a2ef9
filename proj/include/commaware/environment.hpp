#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "commaware/core.hpp"

namespace commaware {

enum class EnvKind { distributed, continuous, uniform };

std::string_view to_string(EnvKind kind);
EnvKind parse_env_kind(std::string_view text);

struct EnvConfig {
  int size = 64;
  double feature_ratio = 0.65;  // r_f
  double denial_ratio = 0.0;    // r_c
  EnvKind kind = EnvKind::uniform;
  double gradient_width = 4.0;
  // Distributed kind: 0 means "as many patches as needed".
  int patch_count = 0;
  int patch_radius = 3;
  int feature_count = 2;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Square row-major grid of unit cells; cell (ix, iy) covers
/// [ix, ix+1) x [iy, iy+1).
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int size, T fill) : size_(size), cells_(static_cast<std::size_t>(size) * size, fill) {}

  int size() const { return size_; }
  T& at(int ix, int iy) { return cells_[index(ix, iy)]; }
  const T& at(int ix, int iy) const { return cells_[index(ix, iy)]; }
  const std::vector<T>& cells() const { return cells_; }
  std::vector<T>& cells() { return cells_; }

  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(ix);
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int size_ = 0;
  std::vector<T> cells_;
};

using FeatureGrid = Grid<std::uint8_t>;
using CommGrid = Grid<double>;

/// Exactly round(r_f * size^2) one-cells, placed by a uniform shuffle.
FeatureGrid generate_feature_grid(const EnvConfig& config, Rng& rng);

/// Communication quality field. Denied cells carry q_c = 0; outside them
/// q_c = clamp(distance_to_denied / gradient_width, 0, 1), where the distance
/// is measured between cell centres. Throws std::runtime_error if the
/// distributed layout cannot reach r_c within the retry budget.
CommGrid generate_comm_grid(const EnvConfig& config, Rng& rng);

/// Value of the unit cell containing `pos`; throws std::out_of_range outside
/// [0, size)^2.
int feature_at(const FeatureGrid& grid, Vec2 pos);
double quality_at(const CommGrid& grid, Vec2 pos);

std::size_t count_denied(const CommGrid& grid);

// Portable grid file: a header line
//   layer,size,kind,r_f,r_c,seed
// with its value line, then `size` CSV rows (row 0 is iy = 0).
struct GridFileHeader {
  std::string layer;  // "feature" or "comm"
  int size = 0;
  EnvKind kind = EnvKind::uniform;
  double feature_ratio = 0.0;
  double denial_ratio = 0.0;
  std::uint64_t seed = 0;
};

void write_grid_file(std::ostream& os, const GridFileHeader& header, const std::vector<double>& values);
void write_grid_file(std::ostream& os, const EnvConfig& config, std::uint64_t seed, const FeatureGrid& grid);
void write_grid_file(std::ostream& os, const EnvConfig& config, std::uint64_t seed, const CommGrid& grid);

/// Reads a file written by write_grid_file; values are returned row-major.
GridFileHeader read_grid_file(std::istream& is, std::vector<double>& values);

}  // namespace commaware
