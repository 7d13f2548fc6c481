#include "sharedctl/human/operator.hpp"

#include <cmath>

#include "sharedctl/core/params.hpp"
#include "sharedctl/follower/path_follower.hpp"

namespace sharedctl {

std::string_view to_string(Hand hand) {
  return hand == Hand::Dominant ? "D" : "N";
}

void OperatorProfile::validate() const {
  auto require = [](bool ok, const char* field, const char* msg) {
    if (!ok) throw ConfigError(field, msg);
  };
  require(skill >= 0.0 && skill <= 1.0, "skill", "must be in [0,1]");
  require(reaction_delay >= 0.0 && std::isfinite(reaction_delay), "reaction_delay", "must be >= 0");
  require(preview >= 0.0 && std::isfinite(preview), "preview", "must be >= 0");
  require(k_track >= 0.0 && std::isfinite(k_track), "k_track", "must be >= 0");
  require(f_max >= 0.0 && std::isfinite(f_max), "f_max", "must be >= 0");
  require(noise_std >= 0.0 && std::isfinite(noise_std), "noise_std", "must be >= 0");
  require(tremor_hz >= 0.0 && std::isfinite(tremor_hz), "tremor_hz", "must be >= 0");
  require(tremor_amp >= 0.0 && std::isfinite(tremor_amp), "tremor_amp", "must be >= 0");
  require(hand_penalty >= 0.0 && hand_penalty <= 1.0, "hand_penalty", "must be in [0,1]");
  require(speed > 0.0 && std::isfinite(speed), "speed", "must be > 0");
  require(shape_bias >= 0.0 && shape_bias < 1.0, "shape_bias", "must be in [0,1)");
  require(b_ff >= 0.0 && std::isfinite(b_ff), "b_ff", "must be >= 0");
  require(b_fb >= 0.0 && std::isfinite(b_fb), "b_fb", "must be >= 0");
}

OperatorNoiseState make_noise_state(std::uint64_t seed) {
  OperatorNoiseState st{Rng(seed)};
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  st.tremor_phase_x = phase(st.rng);
  st.tremor_phase_y = phase(st.rng);
  st.tremor_phase_z = phase(st.rng);
  st.shape_phase = phase(st.rng);
  return st;
}

namespace {

// The operator's idea of the path: radially distorted about the centroid,
// two lobes per loop, amplitude shrinking with skill.
Vec3 intended_point(const PathSpec& path, double s, double distortion, double phase) {
  const Vec3 p = path_point(path, s);
  const Vec3& c = path.centroid();
  return c + (p - c) * (1.0 + distortion * std::sin(4.0 * kPi * s + phase));
}

}  // namespace

Vec3 operator_desired_velocity(const OperatorProfile& profile, Hand hand, const Vec3& x,
                               const PathSpec& path, double shape_phase) {
  const double skill = profile.effective_skill(hand);
  const NearestResult near = nearest_param(path, x);
  const double ahead = profile.preview * profile.speed / path.length();
  double s_prev = near.s_near + ahead;
  if (!path.closed()) s_prev = std::min(s_prev, 1.0);
  const double distortion = profile.shape_bias * (1.0 - skill);
  const Vec3 target = intended_point(path, s_prev, distortion, shape_phase);
  return profile.k_track * (target - x);
}

Vec3 operator_force(const OperatorProfile& profile, Hand hand, const SensedState& sensed,
                    const PathSpec& path, double t, OperatorNoiseState& noise) {
  const double skill = profile.effective_skill(hand);
  const Vec3 v_des = operator_desired_velocity(profile, hand, sensed.x, path, noise.shape_phase);
  Vec3 f = profile.b_ff * v_des + profile.b_fb * (v_des - sensed.v_ee);

  const double clumsiness = 1.0 + 2.0 * (1.0 - skill);
  std::normal_distribution<double> white(0.0, 1.0);
  const Vec3 n(white(noise.rng), white(noise.rng), white(noise.rng));
  f += profile.noise_std * clumsiness * n;
  const double w = 2.0 * kPi * profile.tremor_hz * t;
  f += profile.tremor_amp * clumsiness *
       Vec3(std::sin(w + noise.tremor_phase_x), std::sin(w + noise.tremor_phase_y),
            std::sin(w + noise.tremor_phase_z));

  const double norm = f.norm();
  if (norm > profile.f_max) {
    const Vec3 raw = f;
    double scale = profile.f_max / norm;
    f = raw * scale;
    while (f.norm() > profile.f_max) {
      scale = std::nextafter(scale, 0.0);
      f = raw * scale;
    }
  }
  return f;
}

SyntheticOperator::SyntheticOperator(OperatorProfile profile, Hand hand, PathSpec path, double dt,
                                     std::uint64_t seed)
    : profile_(std::move(profile)), hand_(hand), path_(std::move(path)),
      delay_ticks_(static_cast<std::size_t>(std::llround(profile_.reaction_delay / dt))),
      noise_(make_noise_state(seed)) {
  profile_.validate();
}

Vec3 SyntheticOperator::force(const Vec3& x, const Vec3& v_ee, double t) {
  history_.push_back({x, v_ee});
  // Until the buffer fills the operator sees the initial state.
  while (history_.size() > delay_ticks_ + 1) history_.pop_front();
  return operator_force(profile_, hand_, history_.front(), path_, t, noise_);
}

std::vector<OperatorProfile> default_population(std::uint64_t master_seed) {
  Rng rng(split_seed(master_seed, {0x706f70ULL}));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
  std::vector<OperatorProfile> out;
  for (int i = 0; i < 10; ++i) {
    OperatorProfile p;
    p.id = "V" + std::string(i + 1 < 10 ? "0" : "") + std::to_string(i + 1);
    p.skill = uniform(0.3, 0.95);
    p.hand_penalty = uniform(0.6, 1.0);
    p.reaction_delay = uniform(0.10, 0.20);
    p.tremor_hz = uniform(6.0, 10.0);
    p.speed = uniform(0.035, 0.05);
    p.seed = split_seed(master_seed, {static_cast<std::uint64_t>(i)});
    out.push_back(p);
  }
  return out;
}

}  // namespace sharedctl
