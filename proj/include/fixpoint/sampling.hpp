#pragma once

// Deterministic point sampling over box domains: full per-axis grids
// (corners always included) and a seeded uniform stream.

#include <cstdint>
#include <random>
#include <vector>

#include "fixpoint/space.hpp"

namespace fixpoint {

// 53-bit uniform in [0,1); stable for a given engine state.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Point random_point(std::mt19937_64& rng, const BoxDomain& box) {
  std::vector<double> c(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const double t = uniform01(rng);
    c[i] = box.lower()[i] + t * (box.upper()[i] - box.lower()[i]);
  }
  return Point(std::move(c));
}

// per_axis points per axis, endpoints included (per_axis == 1 gives midpoints).
inline std::vector<Point> grid_points(const BoxDomain& box, std::size_t per_axis) {
  if (per_axis == 0) return {};
  const std::size_t d = box.dim();
  std::vector<std::vector<double>> axis(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double lo = box.lower()[i], hi = box.upper()[i];
    if (per_axis == 1) {
      axis[i] = {lo + 0.5 * (hi - lo)};
      continue;
    }
    axis[i].reserve(per_axis);
    for (std::size_t j = 0; j < per_axis; ++j)
      axis[i].push_back(lo + (hi - lo) * (static_cast<double>(j) / static_cast<double>(per_axis - 1)));
    axis[i].front() = lo;
    axis[i].back() = hi;
  }
  std::vector<Point> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= axis[i].size();
  out.reserve(total);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<double> c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = axis[i][idx[i]];
    out.emplace_back(std::move(c));
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] < axis[i].size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

}  // namespace fixpoint
