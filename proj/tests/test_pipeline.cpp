// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "srploc/error.hpp"
#include "srploc/pipeline.hpp"
#include "srploc/sim.hpp"
#include "support.hpp"

namespace srploc {
namespace {

using testing::robot_head;

SignalBlock static_scene(double az, double el, double duration, double fs = 16000.0) {
  SceneSpec scene{.geometry = robot_head(), .trajectory = {{0.0, az, el}}};
  scene.duration = duration;
  scene.fs = fs;
  return render(scene).signal;
}

TEST(Pipeline, StaticSourceDefaults) {
  const LocateResult r = locate_signal(robot_head(), static_scene(40.0, 10.0, 5.0), RunConfig{});
  EXPECT_EQ(r.pairs_used, 66u);
  EXPECT_EQ(r.grid_points, 65160u);
  ASSERT_EQ(r.blocks.size(), 18u);
  EXPECT_EQ(r.low_score_blocks, 0u);
  for (std::size_t k = 0; k < r.blocks.size(); ++k) {
    const auto& b = r.blocks[k];
    EXPECT_NEAR(b.time, 0.256 * static_cast<double>(k) + 0.256, 1e-9);
    const auto e = angular_errors(b, {b.time, 40.0, 10.0, std::nullopt});
    EXPECT_LT(e.azimuth, 2.0);
    EXPECT_LT(e.elevation, 2.0);
  }
}

TEST(Pipeline, SilentInputIsFlagged) {
  SignalBlock silent;
  silent.fs = 16000.0;
  silent.channels.assign(12, std::vector<double>(16000, 0.0));
  RunConfig cfg;
  cfg.grid_res_deg = 5.0;
  const LocateResult r = locate_signal(robot_head(), silent, cfg);
  ASSERT_EQ(r.blocks.size(), 2u);
  EXPECT_EQ(r.low_score_blocks, 2u);
  EXPECT_GT(r.low_score_floor, 0.0);
}

TEST(Pipeline, DecimatesHigherRates) {
  RunConfig cfg;
  cfg.grid_res_deg = 2.0;
  const LocateResult r = locate_signal(robot_head(), static_scene(200.0, -30.0, 1.5, 48000.0), cfg);
  ASSERT_EQ(r.blocks.size(), 4u);
  for (const auto& b : r.blocks) {
    const auto e = angular_errors(b, {b.time, 200.0, -30.0, std::nullopt});
    EXPECT_LE(e.azimuth, 3.0);
    EXPECT_LE(e.elevation, 3.0);
  }
}

TEST(Pipeline, ThreadCountDoesNotChangeResults) {
  RunConfig one;
  one.grid_res_deg = 3.0;
  RunConfig many = one;
  many.threads = 3;
  const SignalBlock s = static_scene(300.0, 45.0, 2.0);
  const auto a = locate_signal(robot_head(), s, one).blocks;
  const auto b = locate_signal(robot_head(), s, many).blocks;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].azimuth, b[k].azimuth);
    EXPECT_EQ(a[k].elevation, b[k].elevation);
    EXPECT_EQ(a[k].score, b[k].score);
  }
}

TEST(Pipeline, QueryTimesAreInterpolated) {
  RunConfig cfg;
  cfg.grid_res_deg = 3.0;
  const std::vector<double> times{0.0, 0.5, 1.0, 1.7};
  const auto r = locate_signal(robot_head(), static_scene(90.0, 0.0, 2.0), cfg, times);
  ASSERT_EQ(r.output.size(), 4u);
  for (std::size_t k = 0; k < times.size(); ++k) {
    EXPECT_DOUBLE_EQ(r.output[k].time, times[k]);
    EXPECT_NEAR(r.output[k].azimuth, 90.0, 1.5);
  }
}

TEST(Pipeline, CurvilinearPresetOnSphere) {
  SceneSpec scene{.geometry = testing::em32(), .trajectory = {{0.0, 10.0, 20.0}}};
  scene.duration = 0.6;
  RunConfig cfg;
  cfg.grid_res_deg = 5.0;
  cfg.min_pair_angle_deg = 90.0;
  const auto r = locate_signal(testing::em32(), render(scene).signal, cfg);
  EXPECT_EQ(r.pairs_used, 256u);
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_LE(angular_errors(r.blocks[0], {0.0, 10.0, 20.0, std::nullopt}).azimuth, 5.0);
}

TEST(Pipeline, RejectsMismatchedInput) {
  SignalBlock mono;
  mono.fs = 16000.0;
  mono.channels.assign(1, std::vector<double>(16000, 0.0));
  EXPECT_THROW(locate_signal(robot_head(), mono, RunConfig{}), ArgumentError);
  RunConfig bad;
  bad.hop_ms = 600.0;
  EXPECT_THROW(locate_signal(robot_head(), static_scene(0, 0, 0.6), bad), ArgumentError);
  SignalBlock odd = static_scene(0, 0, 0.6);
  odd.fs = 44100.0;
  EXPECT_THROW(locate_signal(robot_head(), odd, RunConfig{}), UnsupportedRateError);
}

}  // namespace
}  // namespace srploc
