#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "sharedctl/core/path.hpp"
#include "sharedctl/human/rng.hpp"

namespace sharedctl {

enum class Hand { Dominant, NonDominant };

std::string_view to_string(Hand hand);

// Synthetic operator. The operator pursues a preview point on its own
// (skill-distorted) idea of the path and converts the desired velocity into a
// force through an internal model of the admittance damping (feedforward
// b_ff) plus velocity feedback (b_fb), corrupted by white noise and tremor.
struct OperatorProfile {
  std::string id = "op";
  double skill = 0.8;            // [0,1]
  double reaction_delay = 0.15;  // s
  double preview = 0.4;          // s of travel at nominal speed
  double k_track = 2.5;          // 1/s pursuit gain
  double f_max = 20.0;           // N
  double noise_std = 1.0;        // N per axis
  double tremor_hz = 8.0;
  double tremor_amp = 1.0;       // N
  double hand_penalty = 0.8;     // skill multiplier for the non-dominant hand
  double speed = 0.04;           // m/s nominal tracing speed
  double shape_bias = 0.3;       // relative radial distortion at skill 0
  double b_ff = 83.3;            // Ns/m, internal model of the damping
  double b_fb = 40.0;            // Ns/m, velocity feedback gain
  std::uint64_t seed = 1;

  // Throws ConfigError on out-of-range fields.
  void validate() const;
  double effective_skill(Hand hand) const {
    return hand == Hand::Dominant ? skill : skill * hand_penalty;
  }
};

// What the operator perceives at one instant.
struct SensedState {
  Vec3 x = Vec3::Zero();
  Vec3 v_ee = Vec3::Zero();
};

struct OperatorNoiseState {
  Rng rng;
  double tremor_phase_x = 0.0;
  double tremor_phase_y = 0.0;
  double tremor_phase_z = 0.0;
  double shape_phase = 0.0;
};

OperatorNoiseState make_noise_state(std::uint64_t seed);

// Force for an already-delayed sensed state. Deterministic given the noise
// state. |result| <= f_max.
Vec3 operator_force(const OperatorProfile& profile, Hand hand, const SensedState& sensed,
                    const PathSpec& path, double t, OperatorNoiseState& noise);

// Desired velocity toward the preview point, without noise.
Vec3 operator_desired_velocity(const OperatorProfile& profile, Hand hand, const Vec3& x,
                               const PathSpec& path, double shape_phase);

// Stateful wrapper: owns the reaction-delay ring buffer and the noise stream.
class SyntheticOperator {
 public:
  SyntheticOperator(OperatorProfile profile, Hand hand, PathSpec path, double dt,
                    std::uint64_t seed);

  // Push the current state, return the force computed from the delayed one.
  Vec3 force(const Vec3& x, const Vec3& v_ee, double t);

  const OperatorProfile& profile() const { return profile_; }

 private:
  OperatorProfile profile_;
  Hand hand_;
  PathSpec path_;
  std::size_t delay_ticks_;
  std::deque<SensedState> history_;
  OperatorNoiseState noise_;
};

// Ten-operator cohort: skill ~ U[0.3, 0.95], hand_penalty ~ U[0.6, 1.0].
std::vector<OperatorProfile> default_population(std::uint64_t master_seed);

inline constexpr std::uint64_t kDefaultMasterSeed = 20240607;

}  // namespace sharedctl
