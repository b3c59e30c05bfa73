// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "srploc/geometry.hpp"

namespace srploc {

// Array description in JSON:
//
//   {
//     "name": "robot_head_like_12ch",          (optional)
//     "center": [0.0, 0.0, 0.0],               (optional, meters)
//     "microphones": [
//       {"label": "m01", "position": [x, y, z]},   (label optional)
//       ...
//     ]
//   }
//
// Errors carry the file name plus the line (syntax errors) or the JSON path
// of the offending field (schema errors) and are thrown as FormatError.
ArrayGeometry parse_geometry(const std::string& text, const std::string& source_name);
ArrayGeometry read_geometry(const std::string& path);

}  // namespace srploc
