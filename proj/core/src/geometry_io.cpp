// SPDX-License-Identifier: Apache-2.0
#include "srploc/geometry_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "srploc/error.hpp"

namespace srploc {

namespace {

using nlohmann::json;

Vec3 parse_vec3(const json& node, const std::string& source, const std::string& field) {
  if (!node.is_array() || node.size() != 3) {
    throw FormatError(source + ": field '" + field + "' must be an array [x, y, z]");
  }
  double c[3];
  for (std::size_t k = 0; k < 3; ++k) {
    if (!node[k].is_number()) {
      throw FormatError(source + ": field '" + field + "[" + std::to_string(k) + "]' is not a number");
    }
    c[k] = node[k].get<double>();
    if (!std::isfinite(c[k])) {
      throw FormatError(source + ": field '" + field + "[" + std::to_string(k) + "]' is not finite");
    }
  }
  return {c[0], c[1], c[2]};
}

}  // namespace

ArrayGeometry parse_geometry(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw FormatError(source + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw FormatError(source + ": top level must be a JSON object");

  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw FormatError(source + ": field 'name' must be a string");
    name = doc["name"].get<std::string>();
  }
  std::optional<Vec3> center;
  if (doc.contains("center") && !doc["center"].is_null()) {
    center = parse_vec3(doc["center"], source, "center");
  }
  if (!doc.contains("microphones")) throw FormatError(source + ": missing field 'microphones'");
  const json& mics = doc["microphones"];
  if (!mics.is_array()) throw FormatError(source + ": field 'microphones' must be an array");

  std::vector<Vec3> positions;
  std::vector<std::string> labels;
  bool any_label = false;
  for (std::size_t m = 0; m < mics.size(); ++m) {
    const std::string field = "microphones[" + std::to_string(m) + "]";
    const json& mic = mics[m];
    if (!mic.is_object()) throw FormatError(source + ": field '" + field + "' must be an object");
    if (!mic.contains("position")) {
      throw FormatError(source + ": missing field '" + field + ".position'");
    }
    positions.push_back(parse_vec3(mic["position"], source, field + ".position"));
    if (mic.contains("label")) {
      if (!mic["label"].is_string()) {
        throw FormatError(source + ": field '" + field + ".label' must be a string");
      }
      labels.push_back(mic["label"].get<std::string>());
      any_label = true;
    } else {
      labels.push_back("mic" + std::to_string(m));
    }
  }
  if (positions.size() < 2) {
    throw FormatError(source + ": field 'microphones' lists " + std::to_string(positions.size()) +
                      " microphone(s); at least 2 are required");
  }
  for (std::size_t a = 0; a < positions.size(); ++a) {
    for (std::size_t b = a + 1; b < positions.size(); ++b) {
      if (norm(positions[b] - positions[a]) <= ArrayGeometry::kMinMicSpacing) {
        throw FormatError(source + ": fields 'microphones[" + std::to_string(a) + "]' and 'microphones[" +
                          std::to_string(b) + "]' have the same position");
      }
    }
  }
  if (!any_label) labels.clear();
  try {
    return ArrayGeometry(std::move(positions), center, std::move(name), std::move(labels));
  } catch (const GeometryError& e) {
    throw FormatError(source + ": " + e.what());
  }
}

ArrayGeometry read_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open geometry file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_geometry(ss.str(), path);
}

}  // namespace srploc
