#include "qspt/grid.hpp"

namespace qspt {

std::vector<std::pair<int32_t, int32_t>> range_offsets(const GridParams& p) {
  const int64_t r2 = p.range_sq();
  // Largest |d| with d*d <= r2, found without floating point.
  int32_t rmax = 0;
  while (static_cast<int64_t>(rmax + 1) * (rmax + 1) <= r2) ++rmax;

  std::vector<std::pair<int32_t, int32_t>> offsets;
  for (int32_t dx = -rmax; dx <= rmax; ++dx) {
    const int64_t rem = r2 - static_cast<int64_t>(dx) * dx;
    int32_t dymax = 0;
    while (static_cast<int64_t>(dymax + 1) * (dymax + 1) <= rem) ++dymax;
    for (int32_t dy = -dymax; dy <= dymax; ++dy) {
      if (dx == 0 && dy == 0) continue;
      offsets.emplace_back(dx, dy);
    }
  }
  return offsets;
}

std::vector<Location> grid_neighbors(Location v, const GridParams& p) {
  if (!in_bounds(v, p)) throw std::invalid_argument("location outside grid");
  std::vector<Location> out;
  // Lexicographic (dx, dy) order yields neighbors sorted by linear index,
  // because |dy| < width for every in-bounds pair.
  for (auto [dx, dy] : range_offsets(p)) {
    Location u{v.x + dx, v.y + dy};
    if (in_bounds(u, p)) out.push_back(u);
  }
  return out;
}

}  // namespace qspt
