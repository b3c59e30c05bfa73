// SPDX-License-Identifier: Apache-2.0
// Independent reference implementations shared by the unit and acceptance
// tests. They deliberately avoid the library's own helpers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "srploc/geometry.hpp"

namespace srploc::testing {

// Great-circle distance from azimuth/elevation in degrees (haversine).
inline double haversine_deg(double az1, double el1, double az2, double el2) {
  const double r = M_PI / 180.0;
  const double dphi = (el2 - el1) * r;
  const double dlam = (az2 - az1) * r;
  const double h = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(el1 * r) * std::cos(el2 * r) * std::sin(dlam / 2) * std::sin(dlam / 2);
  return 2.0 * std::asin(std::min(1.0, std::sqrt(h))) / r;
}

// O(N^2) greedy peak picking: largest alive value (lowest index on ties),
// then kill everything closer than min_sep.
inline std::vector<std::size_t> greedy_oracle(const std::vector<double>& v, const DoaGrid& grid,
                                              std::size_t max_peaks, double min_sep) {
  std::vector<std::size_t> picked;
  std::vector<bool> alive(v.size(), true);
  while (picked.size() < max_peaks) {
    std::ptrdiff_t best = -1;
    for (std::size_t g = 0; g < v.size(); ++g) {
      if (alive[g] && (best < 0 || v[g] > v[static_cast<std::size_t>(best)])) best = static_cast<std::ptrdiff_t>(g);
    }
    if (best < 0) break;
    const auto b = static_cast<std::size_t>(best);
    picked.push_back(b);
    for (std::size_t g = 0; g < v.size(); ++g) {
      if (g == b || haversine_deg(grid.azimuth_of(g), grid.elevation_of(g), grid.azimuth_of(b),
                                  grid.elevation_of(b)) < min_sep) {
        alive[g] = false;
      }
    }
  }
  return picked;
}

}  // namespace srploc::testing
