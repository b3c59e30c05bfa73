// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "srploc/geometry.hpp"
#include "srploc/geometry_io.hpp"

namespace srploc::testing {

inline std::string array_path(const std::string& name) {
  return std::string(SRPLOC_ARRAYS_DIR) + "/" + name;
}

inline const ArrayGeometry& robot_head() {
  static const ArrayGeometry g = read_geometry(array_path("robot_head_like_12ch.json"));
  return g;
}

inline const ArrayGeometry& em32() {
  static const ArrayGeometry g = read_geometry(array_path("eigenmike_like_32ch.json"));
  return g;
}

inline ArrayGeometry two_mics(double spacing = 0.1) {
  return ArrayGeometry({{0.0, 0.0, 0.0}, {spacing, 0.0, 0.0}});
}

}  // namespace srploc::testing
