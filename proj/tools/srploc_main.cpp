// SPDX-License-Identifier: Apache-2.0
//
// srploc: command-line front end.
//
//   srploc locate   --geometry G --input X.wav --out est.csv [options]
//   srploc simulate --geometry G --az A --el E --duration S --out X.wav --truth truth.csv
//   srploc eval     --est est.csv --ref truth.csv --thresholds 10,20
//
// On failure a single line "error: <kind>: <message>" goes to stderr and the
// exit code is nonzero (1 for runtime errors, 2 for usage errors).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "srploc/error.hpp"
#include "srploc/eval.hpp"
#include "srploc/geometry_io.hpp"
#include "srploc/pipeline.hpp"
#include "srploc/sim.hpp"
#include "srploc/wav.hpp"

namespace {

void log_info(const std::string& msg) { std::cerr << "srploc: info: " << msg << '\n'; }
void log_warn(const std::string& msg) { std::cerr << "srploc: warning: " << msg << '\n'; }

std::optional<srploc::FrequencyBand> parse_band(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw srploc::ArgumentError("band '" + text + "' must be LOW:HIGH in Hz");
  }
  try {
    return srploc::FrequencyBand{std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw srploc::ArgumentError("band '" + text + "' must be LOW:HIGH in Hz");
  }
}

struct LocateArgs {
  srploc::RunConfig config;
  std::string pooling = "sum,sum,max";
  std::string band;
  std::string timestamps;
  bool spherical = false;
};

int run_locate(LocateArgs& args) {
  srploc::RunConfig& config = args.config;
  config.pooling = srploc::PoolingSpec::parse(args.pooling);
  config.band = parse_band(args.band);
  if (!args.timestamps.empty()) config.timestamps_path = args.timestamps;
  if (args.spherical && config.min_pair_angle_deg == 0.0) config.min_pair_angle_deg = 90.0;

  const srploc::LocateResult result = srploc::locate(config);
  log_info("using " + std::to_string(result.pairs_used) + " microphone pairs, " +
           std::to_string(result.grid_points) + " grid points, pooling " +
           config.pooling.to_string());
  log_info("wrote " + std::to_string(result.output.size()) + " estimates from " +
           std::to_string(result.blocks.size()) + " blocks to " + config.output_path);
  if (result.low_score_blocks > 0) {
    log_warn(std::to_string(result.low_score_blocks) + " of " + std::to_string(result.blocks.size()) +
             " blocks scored below the floor " + std::to_string(result.low_score_floor) +
             "; their estimates are unreliable (silent or incoherent input)");
  }
  return 0;
}

struct SimulateArgs {
  std::string geometry;
  std::optional<double> azimuth;
  std::optional<double> elevation;
  std::string trajectory;
  std::optional<double> duration;
  double fs = 16000.0;
  std::optional<double> snr_db;
  std::optional<std::uint64_t> seed;
  std::uint64_t source_seed = 1;
  double source_rms = 0.1;
  std::string source_path;
  std::string out;
  std::string truth;
  std::string format = "float32";
  double speed_of_sound = srploc::kDefaultSpeedOfSound;
  double truth_period = 0.1;
};

int run_simulate(const SimulateArgs& args) {
  const srploc::ArrayGeometry geom = srploc::read_geometry(args.geometry);
  std::vector<srploc::TrajectoryPoint> trajectory;
  if (!args.trajectory.empty()) {
    for (const auto& r : srploc::read_trajectory_csv(args.trajectory)) {
      trajectory.push_back({r.time, r.azimuth, r.elevation});
    }
  } else {
    if (!args.azimuth || !args.elevation) {
      throw srploc::ArgumentError("either --traj or both --az and --el are required");
    }
    trajectory.push_back({0.0, *args.azimuth, *args.elevation});
  }

  srploc::SceneSpec scene{.geometry = geom, .trajectory = trajectory};
  scene.fs = args.fs;
  scene.speed_of_sound = args.speed_of_sound;
  scene.truth_period = args.truth_period;
  scene.snr_db = args.snr_db;
  scene.noise_seed = args.seed;
  if (!args.source_path.empty()) {
    srploc::SignalBlock src = srploc::read_audio(args.source_path);
    if (src.channel_count() != 1) {
      throw srploc::ArgumentError(args.source_path + ": source must be mono, got " +
                                  std::to_string(src.channel_count()) + " channels");
    }
    src = srploc::decimate(src, args.fs);
    scene.duration = args.duration.value_or(static_cast<double>(src.length()) / args.fs);
    scene.source = srploc::SignalSource{std::move(src.channels.front()), args.fs};
  } else {
    if (!args.duration) throw srploc::ArgumentError("--duration is required for a white-noise source");
    scene.duration = *args.duration;
    scene.source = srploc::WhiteNoiseSource{args.source_seed, args.source_rms};
  }

  const srploc::RenderedScene rendered = srploc::render(scene);
  srploc::write_audio(args.out, rendered.signal, srploc::parse_sample_format(args.format));
  srploc::write_trajectory_csv(args.truth, rendered.truth);
  log_info("rendered " + std::to_string(rendered.signal.channel_count()) + " channels, " +
           std::to_string(rendered.signal.length()) + " samples at " + std::to_string(args.fs) +
           " Hz to " + args.out);
  return 0;
}

struct EvalArgs {
  std::string est;
  std::string ref;
  std::vector<double> thresholds{10.0, 20.0};
  bool json = false;
};

int run_eval(const EvalArgs& args) {
  const auto est = srploc::read_trajectory_csv(args.est);
  const auto ref = srploc::read_trajectory_csv(args.ref);
  const auto rep = srploc::report(est, ref, args.thresholds);
  std::cout << (args.json ? srploc::report_to_json(rep) + "\n" : srploc::format_report(rep));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multichannel sound source localization with SRP-PHAT"};
  app.require_subcommand(1);

  LocateArgs loc;
  auto* locate = app.add_subcommand("locate", "Estimate source directions from multichannel audio");
  locate->add_option("--geometry", loc.config.geometry_path, "Array geometry JSON")->required();
  locate->add_option("--input", loc.config.input_path, "Multichannel WAV input")->required();
  locate->add_option("--out", loc.config.output_path, "Estimates CSV output")->required();
  locate->add_option("--block-ms", loc.config.block_ms, "Analysis block length (ms)")->capture_default_str();
  locate->add_option("--hop-ms", loc.config.hop_ms, "Block hop (ms)")->capture_default_str();
  locate->add_option("--fft", loc.config.n_fft, "STFT frame length (samples)")->capture_default_str();
  locate->add_option("--fs", loc.config.fs, "Processing sample rate (Hz)")->capture_default_str();
  locate->add_option("--grid-res", loc.config.grid_res_deg, "DOA grid resolution (deg)")->capture_default_str();
  locate->add_option("--aoa-res", loc.config.aoa_res_deg, "Per-pair AOA resolution (deg)")->capture_default_str();
  locate->add_option("--pooling", loc.pooling,
                     "Reducers for pairs,freq,time or axis:reducer list in order")
      ->capture_default_str();
  locate->add_option("--min-pair-angle", loc.config.min_pair_angle_deg,
                     "Discard pairs with a smaller central angle (deg)")
      ->capture_default_str();
  locate->add_flag("--spherical-preset", loc.spherical, "Spherical-array preset: --min-pair-angle 90");
  locate->add_option("--speed-of-sound", loc.config.speed_of_sound, "Speed of sound (m/s)")->capture_default_str();
  locate->add_option("--band", loc.band, "Analysis band LOW:HIGH in Hz");
  locate->add_option("--timestamps", loc.timestamps, "Interpolate estimates to these times (CSV)");
  locate->add_option("--threads", loc.config.threads, "Worker threads (0 = all cores)")->capture_default_str();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Render a far-field source on an array");
  simulate->add_option("--geometry", sim.geometry, "Array geometry JSON")->required();
  simulate->add_option("--az", sim.azimuth, "Source azimuth (deg)");
  simulate->add_option("--el", sim.elevation, "Source elevation (deg)");
  simulate->add_option("--traj", sim.trajectory, "Trajectory keyframes CSV (time_s,azimuth_deg,elevation_deg)");
  simulate->add_option("--duration", sim.duration, "Duration (s)");
  simulate->add_option("--fs", sim.fs, "Sample rate (Hz)")->capture_default_str();
  simulate->add_option("--snr", sim.snr_db, "Per-channel sensor SNR (dB); omit for noiseless");
  simulate->add_option("--seed", sim.seed, "Sensor-noise seed (required with --snr)");
  simulate->add_option("--source-seed", sim.source_seed, "White-noise source seed")->capture_default_str();
  simulate->add_option("--source-rms", sim.source_rms, "White-noise source RMS")->capture_default_str();
  simulate->add_option("--source", sim.source_path, "Mono WAV source instead of white noise");
  simulate->add_option("--out", sim.out, "Multichannel WAV output")->required();
  simulate->add_option("--truth", sim.truth, "Ground-truth CSV output")->required();
  simulate->add_option("--format", sim.format, "pcm16, pcm24, pcm32 or float32")->capture_default_str();
  simulate->add_option("--speed-of-sound", sim.speed_of_sound, "Speed of sound (m/s)")->capture_default_str();
  simulate->add_option("--truth-period", sim.truth_period, "Ground-truth record period (s)")->capture_default_str();

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score estimates against a reference trajectory");
  eval->add_option("--est", ev.est, "Estimates CSV")->required();
  eval->add_option("--ref", ev.ref, "Reference CSV")->required();
  eval->add_option("--thresholds", ev.thresholds, "Success thresholds (deg)")->delimiter(',')->capture_default_str();
  eval->add_flag("--json", ev.json, "Emit JSON instead of a text table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*locate) return run_locate(loc);
    if (*simulate) return run_simulate(sim);
    if (*eval) return run_eval(ev);
  } catch (const srploc::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
