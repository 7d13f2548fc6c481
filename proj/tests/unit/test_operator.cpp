#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "sharedctl/harness/metrics.hpp"
#include "sharedctl/human/operator.hpp"
#include "sharedctl/human/population.hpp"
#include "sharedctl/session/trial.hpp"

using namespace sharedctl;

namespace {

PathSpec circle() { return make_circle_path({}); }

OperatorProfile quiet_profile() {
  OperatorProfile p;
  p.noise_std = 0.0;
  p.tremor_amp = 0.0;
  return p;
}

}  // namespace

TEST(Rng, SplitSeedIsDeterministicAndPathSensitive) {
  EXPECT_EQ(split_seed(1, {2, 3}), split_seed(1, {2, 3}));
  EXPECT_NE(split_seed(1, {2, 3}), split_seed(1, {3, 2}));
  EXPECT_NE(split_seed(1, {2}), split_seed(2, {2}));
  EXPECT_NE(split_seed(1, {0}), split_seed(1, {0, 0}));
}

TEST(Operator, ForceLawWithoutNoise) {
  const PathSpec path = circle();
  OperatorProfile p = quiet_profile();
  auto noise = make_noise_state(9);
  const Vec3 x(0.051, 0.002, 0.0);
  const Vec3 v_ee(0.01, 0.02, 0.0);
  const Vec3 v_des = operator_desired_velocity(p, Hand::Dominant, x, path, noise.shape_phase);
  const Vec3 f = operator_force(p, Hand::Dominant, {x, v_ee}, path, 0.3, noise);
  const Vec3 expected = p.b_ff * v_des + p.b_fb * (v_des - v_ee);
  ASSERT_LE(expected.norm(), p.f_max);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(f[i], expected[i], 1e-12);
}

TEST(Operator, MatchedVelocityLeavesOnlyFeedforward) {
  const PathSpec path = circle();
  OperatorProfile p = quiet_profile();
  auto noise = make_noise_state(1);
  const Vec3 x = path_point(path, 0.2);
  const Vec3 v_des = operator_desired_velocity(p, Hand::Dominant, x, path, noise.shape_phase);
  const Vec3 f = operator_force(p, Hand::Dominant, {x, v_des}, path, 0.0, noise);
  // Through the admittance, f = B v_des would reproduce v_des at steady state.
  EXPECT_NEAR((f - 83.3 * v_des).norm(), 0.0, 1e-12);
}

TEST(Operator, DesiredVelocityPointsAlongThePath) {
  OperatorProfile p = quiet_profile();
  p.skill = 1.0;  // no shape distortion
  const PathSpec path = circle();
  for (double s : {0.0, 0.3, 0.77}) {
    const Vec3 x = path_point(path, s);
    const Vec3 v = operator_desired_velocity(p, Hand::Dominant, x, path, 0.0);
    EXPECT_GT(v.normalized().dot(path_tangent(path, s)), 0.95) << "s=" << s;
  }
}

TEST(Operator, ForceNeverExceedsLimit) {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const PathSpec path = circle();
  for (int i = 0; i < 20000; ++i) {
    OperatorProfile p;
    p.f_max = 30.0 * u01(gen);
    p.noise_std = 10.0 * u01(gen);
    p.b_fb = 200.0 * u01(gen);
    p.skill = u01(gen);
    auto noise = make_noise_state(i);
    const Vec3 x(0.2 * n01(gen), 0.2 * n01(gen), 0.05 * n01(gen));
    const Vec3 v(n01(gen), n01(gen), n01(gen));
    const Vec3 f = operator_force(p, i % 2 ? Hand::Dominant : Hand::NonDominant, {x, v}, path,
                                  10.0 * u01(gen), noise);
    ASSERT_LE(f.norm(), p.f_max) << "i=" << i;
    ASSERT_TRUE(all_finite(f));
  }
}

TEST(Operator, ReactionDelayShiftsTheSensedState) {
  const PathSpec path = circle();
  OperatorProfile p = quiet_profile();
  p.reaction_delay = 0.005;  // 5 ticks
  SyntheticOperator op(p, Hand::Dominant, path, 0.001, 4);
  auto reference_noise = make_noise_state(4);
  std::vector<Vec3> xs;
  for (int k = 0; k < 40; ++k) {
    const Vec3 x = path_point(path, 0.001 * k);
    xs.push_back(x);
    const Vec3 f = op.force(x, Vec3::Zero(), k * 0.001);
    const Vec3 seen = xs[k >= 5 ? k - 5 : 0];
    const Vec3 expected = operator_force(p, Hand::Dominant, {seen, Vec3::Zero()}, path,
                                         k * 0.001, reference_noise);
    ASSERT_EQ(f, expected) << "k=" << k;
  }
}

TEST(Operator, SameSeedSameForces) {
  const PathSpec path = circle();
  const OperatorProfile p;
  SyntheticOperator a(p, Hand::NonDominant, path, 0.001, 77);
  SyntheticOperator b(p, Hand::NonDominant, path, 0.001, 77);
  SyntheticOperator c(p, Hand::NonDominant, path, 0.001, 78);
  bool differs = false;
  for (int k = 0; k < 2000; ++k) {
    const Vec3 x = path_point(path, 0.0005 * k);
    const Vec3 fa = a.force(x, Vec3::Zero(), k * 0.001);
    ASSERT_EQ(fa, b.force(x, Vec3::Zero(), k * 0.001));
    differs |= fa != c.force(x, Vec3::Zero(), k * 0.001);
  }
  EXPECT_TRUE(differs);
}

TEST(Operator, NonDominantHandIsLessSkilled) {
  OperatorProfile p;
  p.skill = 0.8;
  p.hand_penalty = 0.75;
  EXPECT_DOUBLE_EQ(p.effective_skill(Hand::Dominant), 0.8);
  EXPECT_DOUBLE_EQ(p.effective_skill(Hand::NonDominant), 0.6);
}

TEST(Operator, ZeroStrengthNeverMovesGatedSystem) {
  Scenario sc;
  sc.timeout = 2.0;
  OperatorProfile p;
  p.f_max = 0.0;
  for (Mode m : {Mode::Standalone, Mode::Shared, Mode::Impedance}) {
    sc.mode = m;
    const auto rec = run_trial(sc, p, Hand::Dominant, 3);
    ASSERT_FALSE(rec.frames.empty());
    for (const auto& fr : rec.frames) {
      ASSERT_EQ(fr.v_s, Vec3::Zero()) << to_string(m) << " t=" << fr.t;
      ASSERT_EQ(fr.x, rec.frames.front().x);
    }
    EXPECT_FALSE(rec.completed);
  }
}

TEST(Operator, StandaloneRmspeDoesNotGrowWithSkill) {
  Scenario sc;
  sc.mode = Mode::Standalone;
  sc.loops_required = 2;
  sc.discard_loops = 1;
  double prev = std::numeric_limits<double>::infinity();
  for (double skill : {0.2, 0.5, 0.9}) {
    OperatorProfile p;
    p.skill = skill;
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto rec = run_trial(sc, p, Hand::Dominant, seed);
      ASSERT_TRUE(rec.completed) << skill << " " << seed;
      sum += rmspe(rec);
    }
    const double mean = sum / 20.0;
    EXPECT_LE(mean, prev) << "skill " << skill;
    prev = mean;
  }
}

TEST(Operator, ValidateRejectsOutOfRange) {
  OperatorProfile p;
  p.skill = 1.5;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.speed = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.hand_penalty = -0.1;
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_NO_THROW(OperatorProfile{}.validate());
}

TEST(Population, DefaultCohortShape) {
  const auto pop = default_population(kDefaultMasterSeed);
  ASSERT_EQ(pop.size(), 10u);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "V%02zu", i + 1);
    EXPECT_EQ(pop[i].id, id);
    EXPECT_GE(pop[i].skill, 0.3);
    EXPECT_LE(pop[i].skill, 0.95);
    EXPECT_GE(pop[i].hand_penalty, 0.6);
    EXPECT_LE(pop[i].hand_penalty, 1.0);
    EXPECT_NO_THROW(pop[i].validate());
  }
  const auto again = default_population(kDefaultMasterSeed);
  for (std::size_t i = 0; i < pop.size(); ++i) EXPECT_EQ(pop[i].skill, again[i].skill);
  EXPECT_NE(default_population(1)[0].skill, pop[0].skill);
}

TEST(Population, ShippedConfigIsTheDefaultCohort) {
  const auto shipped = load_population_file(SHAREDCTL_CONFIG_DIR "/population_default.json");
  const auto pop = default_population(kDefaultMasterSeed);
  EXPECT_EQ(population_to_json(shipped), population_to_json(pop));
}

TEST(Population, JsonRoundTripIsExact) {
  const auto pop = default_population(99);
  const auto text = population_to_json(pop).dump();
  const auto back = population_from_json(nlohmann::json::parse(text));
  ASSERT_EQ(back.size(), pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    EXPECT_EQ(back[i].id, pop[i].id);
    EXPECT_EQ(back[i].skill, pop[i].skill);
    EXPECT_EQ(back[i].speed, pop[i].speed);
    EXPECT_EQ(back[i].seed, pop[i].seed);
  }
}

TEST(Population, ErrorsNameTheField) {
  auto field_of = [](const char* text) {
    try {
      population_from_json(nlohmann::json::parse(text));
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<accepted>");
  };
  EXPECT_EQ(field_of(R"({"operators":[{"id":"a","bogus":1}]})"), "operators[0].bogus");
  EXPECT_EQ(field_of(R"({"operators":[{"id":"a"},{"id":"b","skill":2}]})"), "operators[1].skill");
  EXPECT_EQ(field_of(R"({"operators":[{"id":"a"},{"id":"a"}]})"), "operators[1].id");
  EXPECT_EQ(field_of(R"({"operators":[]})"), "operators");
  EXPECT_EQ(field_of(R"([1,2])"), "operators");
  EXPECT_EQ(field_of(R"({"operators":[{"id":"a","speed":"fast"}]})"), "operators[0].speed");
  EXPECT_EQ(field_of(R"({"operators":[{"id":"a","skill":0.5}]})"), "<accepted>");
}
