// grid.hpp — integer locations on a W x W grid and range-based neighborhoods.
//
// A network node is identified by its grid location, nothing else. Two
// locations are within range when their squared Euclidean distance is at most
// floor(R^2); squared-distance comparison stays in integer arithmetic, so the
// edge set is bit-exact across platforms even when a pair sits at distance
// exactly R.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qspt/util.hpp"

namespace qspt {

struct GridParams {
  int32_t width = 0;   // grid side length W; coordinates live in [0, W)
  double range = 0.0;  // communication range R, same units as the grid

  // floor(R^2), the integer threshold for the edge predicate.
  int64_t range_sq() const { return static_cast<int64_t>(std::floor(range * range)); }

  bool operator==(const GridParams&) const = default;
};

// width >= 2, range > 0, range < width * sqrt(2). Beyond that bound every
// pair of grid points is adjacent and routing degenerates.
inline void validate_params(const GridParams& p) {
  if (p.width < 2) throw std::invalid_argument("grid width must be >= 2");
  if (!(p.range > 0)) throw std::invalid_argument("range must be positive");
  if (!(p.range * p.range < 2.0 * p.width * p.width))
    throw std::invalid_argument("range must be below width * sqrt(2)");
}

struct Location {
  int32_t x = 0;
  int32_t y = 0;

  bool operator==(const Location&) const = default;
  auto operator<=>(const Location&) const = default;
};

inline bool in_bounds(Location v, const GridParams& p) {
  return v.x >= 0 && v.x < p.width && v.y >= 0 && v.y < p.width;
}

// Linear index x*W + y. This layout is part of the Q-table file format; do
// not change it.
inline uint32_t loc_index(Location v, const GridParams& p) {
  if (!in_bounds(v, p)) throw std::invalid_argument("location outside grid");
  return static_cast<uint32_t>(v.x) * static_cast<uint32_t>(p.width) +
         static_cast<uint32_t>(v.y);
}

inline Location index_to_loc(uint32_t index, const GridParams& p) {
  uint32_t w = static_cast<uint32_t>(p.width);
  if (index >= w * w) throw std::invalid_argument("linear index outside grid");
  return Location{static_cast<int32_t>(index / w), static_cast<int32_t>(index % w)};
}

inline int64_t dist_sq(Location a, Location b) {
  int64_t dx = a.x - b.x;
  int64_t dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double euclid_dist(Location a, Location b) {
  return std::sqrt(static_cast<double>(dist_sq(a, b)));
}

// Edge predicate: distinct locations within range R.
inline bool within_range(Location a, Location b, const GridParams& p) {
  return !(a == b) && dist_sq(a, b) <= p.range_sq();
}

// The (dx, dy) offsets reaching every grid point within range of an interior
// location, excluding (0, 0), in lexicographic order. Shared by all
// locations; boundary locations just clip it.
std::vector<std::pair<int32_t, int32_t>> range_offsets(const GridParams& p);

// All grid locations within range of v, v itself excluded, sorted by linear
// index. These exist whether or not a node occupies them.
std::vector<Location> grid_neighbors(Location v, const GridParams& p);

}  // namespace qspt
