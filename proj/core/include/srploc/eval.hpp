// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace srploc {

// Timestamped direction. Azimuth in [0, 360), elevation in [-90, 90].
struct TrajectoryRecord {
  double time = 0.0;
  double azimuth = 0.0;
  double elevation = 0.0;
  std::optional<double> score;
};

double normalize_azimuth(double deg);

struct AngularError {
  double azimuth = 0.0;    // wrapped, [0, 180]
  double elevation = 0.0;  // absolute difference
};

AngularError angular_errors(const TrajectoryRecord& est, const TrajectoryRecord& ref);

// Linear interpolation on unit direction vectors, renormalized; query times
// outside the record span clamp to the nearest endpoint. Scores, when every
// record has one, are interpolated linearly. Records must be sorted by time.
std::vector<TrajectoryRecord> interpolate_trajectory(std::span<const TrajectoryRecord> records,
                                                     std::span<const double> query_times);

// One row of an error table. The unthresholded row has no threshold and no
// success rate; thresholded rows average only successful records, where a
// record succeeds iff both errors are strictly below the threshold. Means
// are empty when no record qualifies.
struct ErrorRow {
  std::optional<double> threshold;
  std::optional<double> mean_azimuth;
  std::optional<double> mean_elevation;
  std::optional<double> success_rate;  // percent
  std::size_t successes = 0;
  std::size_t total = 0;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;  // unthresholded first, then thresholds descending
};

// Estimates are interpolated to the reference timestamps before scoring.
ErrorReport report(std::span<const TrajectoryRecord> est, std::span<const TrajectoryRecord> ref,
                   std::span<const double> thresholds);

// Aligned text table: one row per threshold with "az | el | suc" columns.
std::string format_report(const ErrorReport& rep);
std::string report_to_json(const ErrorReport& rep);

// CSV with header time_s,azimuth_deg,elevation_deg[,score].
std::vector<TrajectoryRecord> parse_trajectory_csv(std::istream& in, const std::string& source_name);
std::vector<TrajectoryRecord> read_trajectory_csv(const std::string& path);
void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRecord> records);
void write_trajectory_csv(const std::string& path, std::span<const TrajectoryRecord> records);

// Timestamps file: first column holds times in seconds; an optional
// non-numeric header line is skipped.
std::vector<double> read_timestamps(const std::string& path);

}  // namespace srploc
