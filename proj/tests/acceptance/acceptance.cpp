// SPDX-License-Identifier: Apache-2.0
// Acceptance suite. Prints one PASS/FAIL line per criterion; the exit status
// is non-zero when any selected criterion fails.
//
//   srploc_acceptance            run every criterion
//   srploc_acceptance c1 c4      run a subset

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "srploc/eval.hpp"
#include "srploc/gcc.hpp"
#include "srploc/pipeline.hpp"
#include "srploc/sim.hpp"
#include "srploc/srp.hpp"
#include "srploc/stft.hpp"
#include "srploc/wav.hpp"
#include "support.hpp"

namespace {

using namespace srploc;
using srploc::testing::robot_head;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Doa {
  double az;
  double el;
};

// Random directions with |elevation| <= 60 so the azimuth tolerance stays
// meaningful.
std::vector<Doa> random_doas(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> az(0.0, 360.0);
  std::uniform_real_distribution<double> z(std::sin(-M_PI / 3), std::sin(M_PI / 3));
  std::vector<Doa> out;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = az(rng);
    out.push_back({a, std::asin(z(rng)) * 180.0 / M_PI});
  }
  return out;
}

struct StaticRun {
  std::size_t total = 0;
  std::size_t within = 0;
  double worst_az = 0.0;
  double worst_el = 0.0;
};

StaticRun static_fixture(const std::optional<double>& snr_db, double tol) {
  StaticRun run;
  const auto doas = random_doas(20, 20240901);
  for (std::size_t k = 0; k < doas.size(); ++k) {
    SceneSpec scene{.geometry = robot_head(), .trajectory = {{0.0, doas[k].az, doas[k].el}}};
    scene.duration = 5.0;
    scene.source = WhiteNoiseSource{.seed = 100 + k, .rms = 0.1};
    if (snr_db) {
      scene.snr_db = snr_db;
      scene.noise_seed = 500 + k;
    }
    const SignalBlock signal = render(scene).signal;
    const LocateResult r = locate_signal(robot_head(), signal, RunConfig{});
    for (const auto& b : r.blocks) {
      const auto e = angular_errors(b, {b.time, doas[k].az, doas[k].el, std::nullopt});
      ++run.total;
      if (e.azimuth <= tol && e.elevation <= tol) ++run.within;
      run.worst_az = std::max(run.worst_az, e.azimuth);
      run.worst_el = std::max(run.worst_el, e.elevation);
    }
  }
  return run;
}

Outcome c1() {
  const auto t0 = std::chrono::steady_clock::now();
  const StaticRun run = static_fixture(std::nullopt, 2.0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = run.total > 0 && run.within == run.total && secs < 60.0;
  return {pass, fmt("%zu/%zu estimates within 2/2 deg (worst az %.2f, el %.2f), %.1f s of 60 s", run.within,
                    run.total, run.worst_az, run.worst_el, secs)};
}

Outcome c2() {
  const StaticRun run = static_fixture(10.0, 5.0);
  const double rate = 100.0 * static_cast<double>(run.within) / static_cast<double>(run.total);
  return {rate >= 95.0, fmt("10 dB SNR: %zu/%zu (%.1f%%) within 5/5 deg, need >= 95%%", run.within, run.total, rate)};
}

Outcome c3() {
  SceneSpec scene{.geometry = robot_head(), .trajectory = {{0.0, 0.0, 0.0}, {10.0, 90.0, 0.0}}};
  scene.duration = 10.0;
  scene.source = WhiteNoiseSource{.seed = 33, .rms = 0.1};
  const RenderedScene rs = render(scene);
  const LocateResult r = locate_signal(robot_head(), rs.signal, RunConfig{});
  std::size_t good = 0;
  double worst = 0.0;
  for (const auto& b : r.blocks) {
    const auto truth = doa_at(scene.trajectory, b.time);
    const double e = angular_errors(b, truth).azimuth;
    worst = std::max(worst, e);
    if (e <= 5.0) ++good;
  }
  const double rate = 100.0 * static_cast<double>(good) / static_cast<double>(r.blocks.size());
  return {rate >= 90.0, fmt("moving 0->90 deg over 10 s: %zu/%zu blocks (%.1f%%) within 5 deg, worst %.2f",
                            good, r.blocks.size(), rate, worst)};
}

Outcome c4() {
  const ArrayGeometry geom = srploc::testing::two_mics();
  const MicPair pair = derive_pairs(geom, 16000.0, 343.0).front();
  auto grid = std::make_shared<const DoaGrid>(1.0, 1.0);
  const SrpPhatProcessor proc(grid, {pair}, {});
  bool pass = true;
  double worst = 0.0;
  int cases = 0;
  for (int d = -4; d <= 4; ++d) {
    // Source direction in the x-y plane whose plane-wave delay between the
    // mics is exactly d samples.
    const double alpha = std::acos(static_cast<double>(d) / pair.tau) * 180.0 / M_PI;
    SceneSpec scene{.geometry = geom, .trajectory = {{0.0, alpha, 0.0}}};
    scene.duration = 0.512;
    scene.source = WhiteNoiseSource{.seed = static_cast<std::uint64_t>(40 + d), .rms = 0.1};
    const SignalBlock s = render(scene).signal;
    const auto delays = plane_wave_delays(geom, direction(alpha, 0.0), 343.0);
    if (std::abs((delays[0] - delays[1]) * 16000.0 - d) > 1e-9) pass = false;
    const Peak peak = find_peaks(proc.process(stft(s, 1024)), *grid).front();
    const double got = local_aoa_deg(direction(peak.azimuth_deg, peak.elevation_deg), pair.axis);
    worst = std::max(worst, std::abs(got - alpha));
    if (std::abs(got - alpha) > 5.0) pass = false;
    ++cases;
  }
  return {pass, fmt("%d integer delays -4..4 samples, worst |argmax AOA - arccos(d/tau)| = %.2f deg (limit 5)",
                    cases, worst)};
}

// Property checks. Each returns true on success.
bool phat_unit_modulus() {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d(0.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const auto c = phat({d(rng), d(rng)}, k % 50 ? std::complex<double>(d(rng), d(rng)) : 0.0);
    const double m = std::abs(c);
    if (!(std::abs(m - 1.0) < 1e-9 || m == 0.0)) return false;
  }
  return true;
}

Spectrogram noise_spectrogram(std::size_t channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  SignalBlock b;
  b.fs = 16000.0;
  b.channels.assign(channels, std::vector<double>(4096));
  for (auto& ch : b.channels) {
    for (double& v : ch) v = d(rng);
  }
  return stft(b, 1024);
}

bool local_range() {
  const Spectrogram spec = noise_spectrogram(12, 2);
  for (const MicPair& p : derive_pairs(robot_head(), 16000.0, 343.0)) {
    for (double v : local_spectrum(spec, p, AoaAxis(5.0)).values) {
      if (v < -1.0 - 1e-12 || v > 1.0 + 1e-12) return false;
    }
  }
  return true;
}

bool scaling_invariance() {
  const Spectrogram spec = noise_spectrogram(2, 3);
  Spectrogram scaled = spec;
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    for (auto& v : scaled.frame(0, t)) v *= 123.0;
    for (auto& v : scaled.frame(1, t)) v *= 0.004;
  }
  const MicPair p = derive_pairs(srploc::testing::two_mics(), 16000.0, 343.0).front();
  const auto a = local_spectrum(spec, p, AoaAxis(5.0)).values;
  const auto b = local_spectrum(scaled, p, AoaAxis(5.0)).values;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > 1e-9) return false;
  }
  return true;
}

bool swap_symmetry() {
  const Spectrogram spec = noise_spectrogram(2, 4);
  const MicPair p = derive_pairs(srploc::testing::two_mics(), 16000.0, 343.0).front();
  MicPair q = p;
  std::swap(q.i, q.j);
  q.axis = -p.axis;
  const AoaAxis axis(5.0);
  const auto a = local_spectrum(spec, p, axis);
  const auto b = local_spectrum(spec, q, axis);
  for (std::size_t t = 0; t < a.frames; ++t) {
    for (std::size_t f = 0; f < a.bins.size(); ++f) {
      for (std::size_t i = 0; i < a.angles; ++i) {
        if (std::abs(b.at(t, f, i) - a.at(t, f, a.angles - 1 - i)) > 1e-9) return false;
      }
    }
  }
  return true;
}

bool rotation_invariance() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    // Random rotation from a normalized quaternion.
    double q[4] = {u(rng), u(rng), u(rng), u(rng)};
    const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    for (double& x : q) x /= n;
    auto rot = [&](const Vec3& v) {
      const double w = q[0], x = q[1], y = q[2], z = q[3];
      return Vec3{(1 - 2 * (y * y + z * z)) * v.x + 2 * (x * y - w * z) * v.y + 2 * (x * z + w * y) * v.z,
                  2 * (x * y + w * z) * v.x + (1 - 2 * (x * x + z * z)) * v.y + 2 * (y * z - w * x) * v.z,
                  2 * (x * z - w * y) * v.x + 2 * (y * z + w * x) * v.y + (1 - 2 * (x * x + y * y)) * v.z};
    };
    const Vec3 a{0.1 * u(rng), 0.1 * u(rng), 0.1 * u(rng)};
    const Vec3 b{0.1 * u(rng), 0.1 * u(rng), 0.1 * u(rng)};
    const MicPair p = derive_pairs(ArrayGeometry({a, b}), 16000.0, 343.0).front();
    const MicPair rp = derive_pairs(ArrayGeometry({rot(a), rot(b)}), 16000.0, 343.0).front();
    const Vec3 dir = direction(180.0 * (u(rng) + 1.0), 90.0 * u(rng));
    if (std::abs(local_aoa_deg(dir, p.axis) - local_aoa_deg(rot(dir), rp.axis)) > 1e-6) return false;
  }
  return true;
}

bool parseval() {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> d(0.0, 1.0);
  SignalBlock b;
  b.fs = 16000.0;
  b.channels.assign(1, std::vector<double>(8192));
  for (double& v : b.channels[0]) v = d(rng);
  const Spectrogram spec = stft(b, 1024);
  const auto w = sine_window(1024);
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    double et = 0.0;
    for (std::size_t m = 0; m < 1024; ++m) et += std::pow(b.channels[0][t * 512 + m] * w[m], 2);
    double ef = std::norm(spec.at(0, t, 0)) + std::norm(spec.at(0, t, 512));
    for (std::size_t k = 1; k < 512; ++k) ef += 2.0 * std::norm(spec.at(0, t, k));
    if (std::abs(ef / 1024.0 / et - 1.0) > 1e-6) return false;
  }
  return true;
}

bool interpolation_exactness() {
  const AoaAxis axis(5.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> alpha(0.0, 180.0);
  LocalSpectrum ls;
  ls.frames = 1;
  ls.bins = {1};
  ls.angles = axis.size();
  for (std::size_t i = 0; i < axis.size(); ++i) ls.values.push_back(u(rng));
  AoaTable table;
  for (int k = 0; k < 5000; ++k) table.alpha_deg.push_back(alpha(rng));
  const GridSpectra g = interpolate_to_grid(ls, table, axis);
  for (std::size_t k = 0; k < table.alpha_deg.size(); ++k) {
    const double a = table.alpha_deg[k];
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(std::floor(a / 5.0)), 35);
    const double expect = ls.values[i] + (ls.values[i + 1] - ls.values[i]) * (a - 5.0 * i) / 5.0;
    if (std::abs(g.at(0, 0, k) - expect) > 1e-12) return false;
  }
  return true;
}

bool peaks_match_oracle() {
  const DoaGrid grid(3.0, 3.0);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> coarse(0, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    AngularSpectrum s;
    s.values.resize(grid.size());
    for (double& x : s.values) x = trial % 2 ? u(rng) : static_cast<double>(coarse(rng));
    const auto got = find_peaks(s, grid, {.max_peaks = 3, .min_separation_deg = 20.0});
    const auto expect = srploc::testing::greedy_oracle(s.values, grid, 3, 20.0);
    if (got.size() != expect.size()) return false;
    for (std::size_t k = 0; k < got.size(); ++k) {
      if (got[k].index != expect[k]) return false;
    }
  }
  return true;
}

bool success_monotone() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> az(0.0, 360.0);
  std::normal_distribution<double> err(0.0, 20.0);
  std::vector<TrajectoryRecord> ref;
  std::vector<TrajectoryRecord> est;
  for (int k = 0; k < 400; ++k) {
    const double a = az(rng);
    ref.push_back({0.01 * k, a, 0.0, std::nullopt});
    est.push_back({0.01 * k, normalize_azimuth(a + err(rng)), std::clamp(err(rng), -90.0, 90.0), std::nullopt});
  }
  std::vector<double> thr;
  for (int t = 1; t <= 90; ++t) thr.push_back(t);
  const ErrorReport rep = report(est, ref, thr);
  for (std::size_t k = 2; k < rep.rows.size(); ++k) {
    if (*rep.rows[k].success_rate > *rep.rows[k - 1].success_rate) return false;
  }
  return true;
}

bool wraparound() {
  return std::abs(angular_errors({0, 359, 0, {}}, {0, 1, 0, {}}).azimuth - 2.0) < 1e-12;
}

Outcome c5() {
  const std::vector<std::pair<const char*, std::function<bool()>>> props{
      {"phat-unit-modulus", phat_unit_modulus},
      {"local-range", local_range},
      {"scaling-invariance", scaling_invariance},
      {"swap-symmetry", swap_symmetry},
      {"rotation-invariance", rotation_invariance},
      {"parseval", parseval},
      {"interpolation-exactness", interpolation_exactness},
      {"find-peaks-oracle", peaks_match_oracle},
      {"success-monotone", success_monotone},
      {"azimuth-wraparound", wraparound},
  };
  std::string failed;
  for (const auto& [name, fn] : props) {
    if (!fn()) failed += std::string(failed.empty() ? "" : ", ") + name;
  }
  if (failed.empty()) return {true, fmt("%zu/%zu property checks hold", props.size(), props.size())};
  return {false, "failed: " + failed};
}

Outcome c6() {
  const std::size_t head_pairs = derive_pairs(robot_head(), 16000.0, 343.0).size();
  const auto& em = srploc::testing::em32();
  const auto all = derive_pairs(em, 16000.0, 343.0);
  const std::size_t sphere_pairs = select_pairs_curvilinear(em, all, 90.0).size();
  const std::size_t frames = frame_count(8192, 1024, 512);
  const bool pass = head_pairs == 66 && sphere_pairs == 240 && frames == 15;
  return {pass, fmt("12 mics -> %zu pairs (want 66); 32-mic sphere >= 90 deg -> %zu of %zu pairs (want 240); "
                    "512 ms block -> %zu frames (want 15)",
                    head_pairs, sphere_pairs, all.size(), frames)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome c7() {
  const auto dir = std::filesystem::temp_directory_path() / ("srploc_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::vector<std::string> csvs;
  std::vector<std::string> wavs;
  for (int run = 0; run < 2; ++run) {
    SceneSpec scene{.geometry = robot_head(), .trajectory = {{0.0, 30.0, 5.0}, {2.0, 80.0, -10.0}}};
    scene.duration = 2.0;
    scene.source = WhiteNoiseSource{.seed = 77, .rms = 0.1};
    scene.snr_db = 15.0;
    scene.noise_seed = 78;
    const auto wav = dir / ("scene" + std::to_string(run) + ".wav");
    write_audio(wav.string(), render(scene).signal, SampleFormat::kFloat32);
    RunConfig cfg;
    cfg.geometry_path = srploc::testing::array_path("robot_head_like_12ch.json");
    cfg.input_path = wav.string();
    cfg.output_path = (dir / ("est" + std::to_string(run) + ".csv")).string();
    cfg.threads = run == 0 ? 1 : 2;
    locate(cfg);
    wavs.push_back(slurp(wav));
    csvs.push_back(slurp(cfg.output_path));
  }
  std::filesystem::remove_all(dir);
  const bool pass = !csvs[0].empty() && csvs[0] == csvs[1] && wavs[0] == wavs[1];
  return {pass, fmt("two seeded simulate+locate runs: WAV %s, CSV %s (%zu bytes)",
                    wavs[0] == wavs[1] ? "identical" : "DIFFER", csvs[0] == csvs[1] ? "identical" : "DIFFER",
                    csvs[0].size())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::pair<const char*, Outcome (*)()>> criteria{
      {"c1", {"static source end-to-end", c1}}, {"c2", {"noise robustness", c2}},
      {"c3", {"moving source", c3}},            {"c4", {"two-channel consistency", c4}},
      {"c5", {"property suites", c5}},          {"c6", {"pair and frame counts", c6}},
      {"c7", {"determinism", c7}},
  };
  std::vector<std::string> selected(argv + 1, argv + argc);
  if (selected.empty()) {
    for (const auto& [id, _] : criteria) selected.push_back(id);
  }
  int failures = 0;
  for (const auto& id : selected) {
    const auto it = criteria.find(id);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion '%s'\n", id.c_str());
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s %s %s: %s\n", o.pass ? "PASS" : "FAIL", id.c_str(), it->second.first, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
