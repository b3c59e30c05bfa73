// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace srploc {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultSpeedOfSound = 343.0;  // m/s

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Unit vector for azimuth/elevation in degrees. Elevation +90 points along +z.
Vec3 direction(double azimuth_deg, double elevation_deg);

// Inverse of direction(): azimuth in [0, 360), elevation in [-90, 90].
// The input need not be normalized but must be non-zero.
void to_azimuth_elevation(const Vec3& v, double& azimuth_deg, double& elevation_deg);

// Angle between two non-zero vectors, degrees in [0, 180].
double angle_between_deg(const Vec3& a, const Vec3& b);

// Microphone array in meters. The center defaults to the centroid.
class ArrayGeometry {
 public:
  // Throws GeometryError when fewer than 2 mics, non-finite coordinates
  // or two microphones closer than kMinMicSpacing.
  explicit ArrayGeometry(std::vector<Vec3> mics, std::optional<Vec3> center = std::nullopt,
                         std::string name = {}, std::vector<std::string> labels = {});

  static constexpr double kMinMicSpacing = 1e-6;

  std::span<const Vec3> mics() const { return mics_; }
  std::size_t size() const { return mics_.size(); }
  const Vec3& mic(std::size_t i) const { return mics_.at(i); }
  const Vec3& center() const { return center_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<Vec3> mics_;
  Vec3 center_;
  std::string name_;
  std::vector<std::string> labels_;
};

// Unordered microphone pair. The axis points from mic i to mic j; tau is the
// largest delay the pair can observe, in samples (h * fs / c).
struct MicPair {
  std::size_t i = 0;
  std::size_t j = 0;
  Vec3 axis;
  double h = 0.0;
  double tau = 0.0;
};

std::vector<MicPair> derive_pairs(const ArrayGeometry& geom, double fs, double speed_of_sound);

// Keeps pairs whose central angle, seen from the array center, is at least
// min_angle_deg. Throws GeometryError if a used mic sits on the center.
std::vector<MicPair> select_pairs_curvilinear(const ArrayGeometry& geom,
                                              std::span<const MicPair> pairs,
                                              double min_angle_deg);

// Discretized sphere of candidate directions. Points are stored
// elevation-major: index = k * azimuth_count() + j.
class DoaGrid {
 public:
  DoaGrid(double az_step_deg, double el_step_deg);

  std::size_t azimuth_count() const { return azimuths_.size(); }
  std::size_t elevation_count() const { return elevations_.size(); }
  std::size_t size() const { return dirs_.size(); }

  std::span<const double> azimuths() const { return azimuths_; }
  std::span<const double> elevations() const { return elevations_; }
  std::span<const Vec3> dirs() const { return dirs_; }

  std::size_t index(std::size_t az_idx, std::size_t el_idx) const {
    return el_idx * azimuths_.size() + az_idx;
  }
  double azimuth_of(std::size_t idx) const { return azimuths_[idx % azimuths_.size()]; }
  double elevation_of(std::size_t idx) const { return elevations_[idx / azimuths_.size()]; }

  double azimuth_step() const { return az_step_; }
  double elevation_step() const { return el_step_; }

 private:
  double az_step_;
  double el_step_;
  std::vector<double> azimuths_;
  std::vector<double> elevations_;
  std::vector<Vec3> dirs_;
};

inline DoaGrid build_grid(double az_step_deg, double el_step_deg) {
  return DoaGrid(az_step_deg, el_step_deg);
}

// Local angle of arrival of every grid direction with respect to one pair.
struct AoaTable {
  MicPair pair;
  std::vector<double> alpha_deg;  // one per grid point, in [0, 180]
};

AoaTable compute_aoa_table(const DoaGrid& grid, const MicPair& pair);

// Local AOA of a single direction (clamped arccos of dir . axis).
double local_aoa_deg(const Vec3& dir, const Vec3& axis);

}  // namespace srploc
