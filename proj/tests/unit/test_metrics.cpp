#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "sharedctl/harness/metrics.hpp"

using namespace sharedctl;

namespace {

// Three loops of frames: [0,100) loop 0, [100,300) loop 1, frame 300 loop 2.
// With loops_required = 2, discard_loops = 1 the scored span is [100,300).
TrialRecord synthetic_record() {
  TrialRecord rec;
  rec.scenario.loops_required = 2;
  rec.scenario.discard_loops = 1;
  rec.scenario.rmspe_radius = 0.05;
  rec.completed = true;
  rec.loop_boundaries = {100, 300};
  for (int k = 0; k <= 300; ++k) {
    ControlFrame fr;
    fr.t = 0.001 * k;
    fr.loop = k < 100 ? 0 : (k < 300 ? 1 : 2);
    fr.mode = Mode::Shared;
    fr.f = Vec3(1.0, 0, 0);
    fr.d = 0.005;
    fr.v_h = Vec3(1, 0, 0);
    fr.v_s = Vec3(0, 1, 0);
    fr.eta_h = 0.5;
    fr.eta_r = 0.25;
    fr.eta_s = 1.0;
    rec.frames.push_back(fr);
  }
  return rec;
}

}  // namespace

TEST(Metrics, ScoredSpanExcludesDiscardedAndExtraLoops) {
  EXPECT_EQ(scored_frame_count(synthetic_record()), 200u);
}

TEST(Metrics, ClosedFormValues) {
  const auto m = compute_metrics(synthetic_record());
  EXPECT_NEAR(m.completion_time, 0.2, 1e-12);
  EXPECT_DOUBLE_EQ(m.mean_force, 1.0);
  EXPECT_NEAR(m.rmspe, 10.0, 1e-12);  // 5 mm on a 5 cm reference
  EXPECT_DOUBLE_EQ(m.intervention_level, 100.0);
  EXPECT_DOUBLE_EQ(m.command_variation, 0.0);
  EXPECT_DOUBLE_EQ(m.disagreement, 50.0);  // right angle
  EXPECT_DOUBLE_EQ(m.mean_eta_h, 0.5);
  EXPECT_DOUBLE_EQ(m.mean_eta_r, 0.25);
  EXPECT_DOUBLE_EQ(m.mean_eta_s, 1.0);
}

TEST(Metrics, RmspeIsRootMeanSquare) {
  auto rec = synthetic_record();
  for (std::size_t k = 0; k < rec.frames.size(); ++k) rec.frames[k].d = k % 2 ? 0.003 : 0.004;
  EXPECT_NEAR(rmspe(rec), 100.0 * std::sqrt((0.06 * 0.06 + 0.08 * 0.08) / 2.0), 1e-12);
  rec.scenario.rmspe_radius = 0.1;
  EXPECT_NEAR(rmspe(rec), 50.0 * std::sqrt((0.06 * 0.06 + 0.08 * 0.08) / 2.0), 1e-12);
}

TEST(Metrics, InterventionLevelCountsActiveFrames) {
  auto rec = synthetic_record();
  for (std::size_t k = 0; k < rec.frames.size(); ++k) {
    rec.frames[k].f = Vec3(0, k % 4 == 0 ? 0.5 : 0.49, 0);
  }
  EXPECT_DOUBLE_EQ(intervention_level(rec, 0.5), 25.0);
}

TEST(Metrics, CommandVariationStep) {
  auto rec = synthetic_record();
  // Force doubles at frame 200: frames [200,300) differ from 0.1 s earlier.
  for (std::size_t k = 200; k < rec.frames.size(); ++k) rec.frames[k].f = Vec3(2, 0, 0);
  EXPECT_DOUBLE_EQ(command_variation(rec), 50.0);
  // 1 -> 1.09 is within 10 %.
  for (std::size_t k = 200; k < rec.frames.size(); ++k) rec.frames[k].f = Vec3(1.09, 0, 0);
  EXPECT_DOUBLE_EQ(command_variation(rec), 0.0);
}

TEST(Metrics, CommandVariationFloorSuppressesNoiseAtRest) {
  auto rec = synthetic_record();
  for (std::size_t k = 0; k < rec.frames.size(); ++k) rec.frames[k].f = Vec3(k % 2 ? 0.01 : 0.04, 0, 0);
  EXPECT_DOUBLE_EQ(command_variation(rec, 0.1, 0.001, 0.5), 0.0);
  EXPECT_GT(command_variation(rec, 0.1, 0.001, 0.0), 0.0);
}

TEST(Metrics, DisagreementSkipsDirectionlessAndStandalone) {
  auto rec = synthetic_record();
  for (std::size_t k = 0; k < rec.frames.size(); k += 2) rec.frames[k].v_s = Vec3::Zero();
  EXPECT_DOUBLE_EQ(disagreement(rec), 50.0);
  for (auto& fr : rec.frames) fr.mode = Mode::Standalone;
  EXPECT_EQ(disagreement(rec), 0.0);
}

TEST(Metrics, IncompleteTrialUsesElapsedTime) {
  auto rec = synthetic_record();
  rec.completed = false;
  EXPECT_NEAR(completion_time(rec), 0.3, 1e-12);
}

TEST(Metrics, NoScoredFramesIsAnError) {
  auto rec = synthetic_record();
  for (auto& fr : rec.frames) fr.loop = 0;
  EXPECT_THROW(compute_metrics(rec), std::domain_error);
}

TEST(Metrics, AgreesWithDirectRecomputationOnARealTrial) {
  Scenario sc;
  const auto rec = run_trial(sc, OperatorProfile{}, Hand::NonDominant, 19);
  ASSERT_TRUE(rec.completed);
  const auto m = compute_metrics(rec);

  const double r_ref = sc.reference_radius();
  // Straight from the definitions, indexing loops by frame.loop.
  double force = 0, err2 = 0, eh = 0, er = 0, es = 0, dis = 0;
  std::size_t n = 0, active = 0, varied = 0, dis_n = 0;
  std::size_t first = rec.frames.size(), last = 0;
  for (std::size_t k = 0; k < rec.frames.size(); ++k) {
    const auto& fr = rec.frames[k];
    if (fr.loop < 1 || fr.loop >= 4) continue;
    first = std::min(first, k);
    last = std::max(last, k);
    ++n;
    const double fn = std::sqrt(fr.f.x() * fr.f.x() + fr.f.y() * fr.f.y() + fr.f.z() * fr.f.z());
    force += fn;
    err2 += (fr.d / r_ref) * (fr.d / r_ref);
    eh += fr.eta_h;
    er += fr.eta_r;
    es += fr.eta_s;
    active += fn >= 0.5;
    const auto& old = rec.frames[k - 100].f;
    const double fo = std::sqrt(old.x() * old.x() + old.y() * old.y() + old.z() * old.z());
    varied += std::abs(fn - fo) > 0.1 * std::max(fo, 0.5);
    const double nh = fr.v_h.norm(), ns = fr.v_s.norm();
    if (nh >= kEpsVel && ns >= kEpsVel) {
      dis += std::acos(std::clamp(fr.v_h.dot(fr.v_s) / (nh * ns), -1.0, 1.0)) / kPi * 100.0;
      ++dis_n;
    }
  }
  const double dn = static_cast<double>(n);
  EXPECT_NEAR(m.mean_force, force / dn, 1e-12);
  EXPECT_NEAR(m.rmspe, 100.0 * std::sqrt(err2 / dn), 1e-12);
  EXPECT_NEAR(m.mean_eta_h, eh / dn, 1e-12);
  EXPECT_NEAR(m.mean_eta_r, er / dn, 1e-12);
  EXPECT_NEAR(m.mean_eta_s, es / dn, 1e-12);
  EXPECT_NEAR(m.intervention_level, 100.0 * active / dn, 1e-12);
  EXPECT_NEAR(m.command_variation, 100.0 * varied / dn, 1e-12);
  EXPECT_NEAR(m.disagreement, dis / dis_n, 1e-6);
  // Scored span runs from the first frame of loop 1 to the frame closing loop 3.
  EXPECT_NEAR(m.completion_time, rec.frames[last + 1].t - rec.frames[first].t, 1e-12);
  // d stored in frames agrees with a fresh projection.
  EXPECT_NEAR(rmspe(rec, sc.path, r_ref), m.rmspe, 1e-7);
}
