// SPDX-License-Identifier: Apache-2.0
#include "srploc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "srploc/error.hpp"
#include "srploc/geometry.hpp"

namespace srploc {

double normalize_azimuth(double deg) {
  double a = std::fmod(deg, 360.0);
  if (a < 0.0) a += 360.0;
  if (a >= 360.0) a -= 360.0;
  return a;
}

AngularError angular_errors(const TrajectoryRecord& est, const TrajectoryRecord& ref) {
  const double d = std::abs(normalize_azimuth(est.azimuth) - normalize_azimuth(ref.azimuth));
  return {std::min(d, 360.0 - d), std::abs(est.elevation - ref.elevation)};
}

std::vector<TrajectoryRecord> interpolate_trajectory(std::span<const TrajectoryRecord> records,
                                                     std::span<const double> query_times) {
  if (records.empty()) throw ArgumentError("cannot interpolate an empty trajectory");
  for (std::size_t k = 1; k < records.size(); ++k) {
    if (records[k].time < records[k - 1].time) {
      throw ArgumentError("trajectory records are not sorted by time at record " + std::to_string(k));
    }
  }
  const bool scored = std::all_of(records.begin(), records.end(),
                                  [](const TrajectoryRecord& r) { return r.score.has_value(); });
  std::vector<TrajectoryRecord> out;
  out.reserve(query_times.size());
  for (double t : query_times) {
    TrajectoryRecord r;
    r.time = t;
    if (t <= records.front().time || records.size() == 1) {
      r = records.front();
    } else if (t >= records.back().time) {
      r = records.back();
    } else {
      const auto hi = std::upper_bound(records.begin(), records.end(), t,
                                       [](double v, const TrajectoryRecord& rec) { return v < rec.time; });
      const TrajectoryRecord& b = *hi;
      const TrajectoryRecord& a = *(hi - 1);
      if (a.time == t) {
        r = a;
      } else {
        const double w = (t - a.time) / (b.time - a.time);
        const Vec3 da = direction(a.azimuth, a.elevation);
        const Vec3 db = direction(b.azimuth, b.elevation);
        const Vec3 v = (1.0 - w) * da + w * db;
        if (norm(v) < 1e-12) {
          // Antipodal endpoints: no unique midpoint, keep the nearer record.
          r = w < 0.5 ? a : b;
        } else {
          to_azimuth_elevation(v, r.azimuth, r.elevation);
        }
        if (scored) r.score = (1.0 - w) * *a.score + w * *b.score;
      }
    }
    r.time = t;
    r.azimuth = normalize_azimuth(r.azimuth);
    r.elevation = std::clamp(r.elevation, -90.0, 90.0);
    if (!scored) r.score.reset();
    out.push_back(r);
  }
  return out;
}

ErrorReport report(std::span<const TrajectoryRecord> est, std::span<const TrajectoryRecord> ref,
                   std::span<const double> thresholds) {
  if (ref.empty()) throw ArgumentError("reference trajectory is empty");
  if (est.empty()) throw ArgumentError("estimate trajectory is empty");
  std::vector<double> times;
  times.reserve(ref.size());
  for (const auto& r : ref) times.push_back(r.time);
  const auto matched = interpolate_trajectory(est, times);

  std::vector<AngularError> errors;
  errors.reserve(ref.size());
  for (std::size_t k = 0; k < ref.size(); ++k) errors.push_back(angular_errors(matched[k], ref[k]));

  auto make_row = [&](std::optional<double> thr) {
    ErrorRow row;
    row.threshold = thr;
    row.total = errors.size();
    double sum_az = 0.0;
    double sum_el = 0.0;
    for (const auto& e : errors) {
      if (thr && !(e.azimuth < *thr && e.elevation < *thr)) continue;
      sum_az += e.azimuth;
      sum_el += e.elevation;
      ++row.successes;
    }
    if (row.successes > 0) {
      row.mean_azimuth = sum_az / static_cast<double>(row.successes);
      row.mean_elevation = sum_el / static_cast<double>(row.successes);
    }
    if (thr) {
      row.success_rate = 100.0 * static_cast<double>(row.successes) / static_cast<double>(row.total);
    }
    return row;
  };

  ErrorReport rep;
  rep.rows.push_back(make_row(std::nullopt));
  std::vector<double> sorted(thresholds.begin(), thresholds.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (double t : sorted) {
    if (!(t > 0.0)) throw ArgumentError("success thresholds must be positive");
    rep.rows.push_back(make_row(t));
  }
  return rep;
}

namespace {

std::string fixed(const std::optional<double>& v, int precision) {
  if (!v) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, *v);
  return buf;
}

}  // namespace

std::string format_report(const ErrorReport& rep) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %8s | %8s | %6s   %s\n", "threshold", "az.", "el.", "suc.",
                "records");
  os << line;
  for (const ErrorRow& row : rep.rows) {
    const std::string thr = row.threshold ? fixed(row.threshold, 0) + " deg" : "no thresh.";
    std::snprintf(line, sizeof line, "%-12s %8s | %8s | %6s   %zu/%zu\n", thr.c_str(),
                  fixed(row.mean_azimuth, 2).c_str(), fixed(row.mean_elevation, 2).c_str(),
                  fixed(row.success_rate, 1).c_str(), row.successes, row.total);
    os << line;
  }
  return os.str();
}

std::string report_to_json(const ErrorReport& rep) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const ErrorRow& row : rep.rows) {
    rows.push_back({{"threshold_deg", opt(row.threshold)},
                    {"mean_azimuth_error_deg", opt(row.mean_azimuth)},
                    {"mean_elevation_error_deg", opt(row.mean_elevation)},
                    {"success_rate_percent", opt(row.success_rate)},
                    {"successes", row.successes},
                    {"records", row.total}});
  }
  return nlohmann::json{{"rows", rows}}.dump(2);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

double parse_number(const std::string& cell, const std::string& source, std::size_t line_no,
                    const std::string& column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size() || !std::isfinite(v)) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw FormatError(source + ":" + std::to_string(line_no) + ": column '" + column +
                      "' is not a finite number: '" + cell + "'");
  }
}

}  // namespace

std::vector<TrajectoryRecord> parse_trajectory_csv(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split_csv(line);
    break;
  }
  if (header.empty()) throw FormatError(source_name + ": empty trajectory file");
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto c_time = column("time_s");
  const auto c_az = column("azimuth_deg");
  const auto c_el = column("elevation_deg");
  const auto c_score = column("score");
  if (!c_time || !c_az || !c_el) {
    throw FormatError(source_name + ":" + std::to_string(line_no) +
                      ": header must contain time_s,azimuth_deg,elevation_deg");
  }
  std::vector<TrajectoryRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (cells.size() < header.size()) {
      throw FormatError(source_name + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " columns, got " + std::to_string(cells.size()));
    }
    TrajectoryRecord r;
    r.time = parse_number(cells[*c_time], source_name, line_no, "time_s");
    r.azimuth = normalize_azimuth(parse_number(cells[*c_az], source_name, line_no, "azimuth_deg"));
    r.elevation = parse_number(cells[*c_el], source_name, line_no, "elevation_deg");
    if (r.elevation < -90.0 || r.elevation > 90.0) {
      throw FormatError(source_name + ":" + std::to_string(line_no) +
                        ": elevation_deg outside [-90, 90]");
    }
    if (c_score) r.score = parse_number(cells[*c_score], source_name, line_no, "score");
    records.push_back(r);
  }
  return records;
}

std::vector<TrajectoryRecord> read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory file '" + path + "'");
  return parse_trajectory_csv(in, path);
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRecord> records) {
  const bool scored = !records.empty() &&
                      std::all_of(records.begin(), records.end(),
                                  [](const TrajectoryRecord& r) { return r.score.has_value(); });
  out << (scored ? "time_s,azimuth_deg,elevation_deg,score\n" : "time_s,azimuth_deg,elevation_deg\n");
  char buf[128];
  for (const auto& r : records) {
    if (scored) {
      std::snprintf(buf, sizeof buf, "%.6f,%.4f,%.4f,%.6f\n", r.time, r.azimuth, r.elevation, *r.score);
    } else {
      std::snprintf(buf, sizeof buf, "%.6f,%.4f,%.4f\n", r.time, r.azimuth, r.elevation);
    }
    out << buf;
  }
}

void write_trajectory_csv(const std::string& path, std::span<const TrajectoryRecord> records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trajectory file '" + path + "'");
  write_trajectory_csv(out, records);
  if (!out) throw IoError("failed while writing '" + path + "'");
}

std::vector<double> read_timestamps(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open timestamps file '" + path + "'");
  std::vector<double> times;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    try {
      std::size_t used = 0;
      const double v = std::stod(cells.front(), &used);
      if (used != cells.front().size() || !std::isfinite(v)) throw std::invalid_argument("");
      times.push_back(v);
    } catch (const std::exception&) {
      if (times.empty() && line_no == 1) continue;  // header
      throw FormatError(path + ":" + std::to_string(line_no) + ": time is not a finite number");
    }
  }
  if (times.empty()) throw FormatError(path + ": no timestamps");
  return times;
}

}  // namespace srploc
