// SPDX-License-Identifier: Apache-2.0
#include "srploc/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "srploc/error.hpp"

namespace srploc {

Vec3 direction(double azimuth_deg, double elevation_deg) {
  const double az = deg2rad(azimuth_deg);
  const double el = deg2rad(elevation_deg);
  return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

void to_azimuth_elevation(const Vec3& v, double& azimuth_deg, double& elevation_deg) {
  const double r = norm(v);
  const double horiz = std::hypot(v.x, v.y);
  elevation_deg = rad2deg(std::atan2(v.z, horiz));
  double az = rad2deg(std::atan2(v.y, v.x));
  if (r == 0.0 || horiz == 0.0) az = 0.0;
  if (az < 0.0) az += 360.0;
  if (az >= 360.0) az -= 360.0;
  azimuth_deg = az;
}

double angle_between_deg(const Vec3& a, const Vec3& b) {
  const double c = std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0);
  return rad2deg(std::acos(c));
}

double local_aoa_deg(const Vec3& dir, const Vec3& axis) {
  return rad2deg(std::acos(std::clamp(dot(dir, axis), -1.0, 1.0)));
}

ArrayGeometry::ArrayGeometry(std::vector<Vec3> mics, std::optional<Vec3> center, std::string name,
                             std::vector<std::string> labels)
    : mics_(std::move(mics)), name_(std::move(name)), labels_(std::move(labels)) {
  if (mics_.size() < 2) {
    throw GeometryError("array needs at least 2 microphones, got " + std::to_string(mics_.size()));
  }
  for (std::size_t m = 0; m < mics_.size(); ++m) {
    const Vec3& p = mics_[m];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw GeometryError("microphone " + std::to_string(m) + " has a non-finite coordinate");
    }
  }
  for (std::size_t a = 0; a < mics_.size(); ++a) {
    for (std::size_t b = a + 1; b < mics_.size(); ++b) {
      if (norm(mics_[b] - mics_[a]) <= kMinMicSpacing) {
        throw GeometryError("microphones " + std::to_string(a) + " and " + std::to_string(b) +
                            " coincide");
      }
    }
  }
  if (!labels_.empty() && labels_.size() != mics_.size()) {
    throw GeometryError("label count " + std::to_string(labels_.size()) +
                        " does not match microphone count " + std::to_string(mics_.size()));
  }
  if (center) {
    if (!std::isfinite(center->x) || !std::isfinite(center->y) || !std::isfinite(center->z)) {
      throw GeometryError("array center has a non-finite coordinate");
    }
    center_ = *center;
  } else {
    Vec3 sum;
    for (const Vec3& p : mics_) sum = sum + p;
    center_ = (1.0 / static_cast<double>(mics_.size())) * sum;
  }
}

std::vector<MicPair> derive_pairs(const ArrayGeometry& geom, double fs, double speed_of_sound) {
  if (!(fs > 0.0)) throw ArgumentError("sampling rate must be positive");
  if (!(speed_of_sound > 0.0)) throw ArgumentError("speed of sound must be positive");
  std::vector<MicPair> pairs;
  const std::size_t n = geom.size();
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec3 d = geom.mic(j) - geom.mic(i);
      const double h = norm(d);
      if (h <= ArrayGeometry::kMinMicSpacing) {
        throw GeometryError("microphones " + std::to_string(i) + " and " + std::to_string(j) +
                            " coincide");
      }
      pairs.push_back({i, j, (1.0 / h) * d, h, h * fs / speed_of_sound});
    }
  }
  return pairs;
}

std::vector<MicPair> select_pairs_curvilinear(const ArrayGeometry& geom,
                                              std::span<const MicPair> pairs,
                                              double min_angle_deg) {
  std::vector<MicPair> kept;
  for (const MicPair& p : pairs) {
    const Vec3 a = geom.mic(p.i) - geom.center();
    const Vec3 b = geom.mic(p.j) - geom.center();
    for (auto [idx, v] : {std::pair{p.i, a}, std::pair{p.j, b}}) {
      if (norm(v) <= ArrayGeometry::kMinMicSpacing) {
        throw GeometryError("microphone " + std::to_string(idx) +
                            " coincides with the array center; curvilinear distance undefined");
      }
    }
    if (min_angle_deg <= 0.0 || angle_between_deg(a, b) >= min_angle_deg) kept.push_back(p);
  }
  return kept;
}

namespace {

// Number of steps of size `step` covering `range`, tolerant to rounding.
std::size_t step_count(double range, double step) {
  return static_cast<std::size_t>(std::ceil(range / step - 1e-9));
}

}  // namespace

DoaGrid::DoaGrid(double az_step_deg, double el_step_deg)
    : az_step_(az_step_deg), el_step_(el_step_deg) {
  if (!(az_step_deg > 0.0) || az_step_deg > 90.0) {
    throw ArgumentError("azimuth resolution must lie in (0, 90] degrees");
  }
  if (!(el_step_deg > 0.0) || el_step_deg > 90.0) {
    throw ArgumentError("elevation resolution must lie in (0, 90] degrees");
  }
  const std::size_t n_az = step_count(360.0, az_step_deg);
  const auto n_el = static_cast<std::size_t>(std::floor(180.0 / el_step_deg + 1e-9)) + 1;
  azimuths_.resize(n_az);
  elevations_.resize(n_el);
  for (std::size_t j = 0; j < n_az; ++j) azimuths_[j] = static_cast<double>(j) * az_step_deg;
  for (std::size_t k = 0; k < n_el; ++k) {
    elevations_[k] = -90.0 + static_cast<double>(k) * el_step_deg;
  }
  dirs_.reserve(n_az * n_el);
  for (double el : elevations_) {
    for (double az : azimuths_) dirs_.push_back(direction(az, el));
  }
}

AoaTable compute_aoa_table(const DoaGrid& grid, const MicPair& pair) {
  AoaTable table{pair, {}};
  table.alpha_deg.reserve(grid.size());
  for (const Vec3& d : grid.dirs()) table.alpha_deg.push_back(local_aoa_deg(d, pair.axis));
  return table;
}

}  // namespace srploc
