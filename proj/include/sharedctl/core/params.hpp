#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sharedctl/core/types.hpp"

namespace sharedctl {

// Rejected configuration value; `field` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Controller gains and loop settings. Diagonal matrices are stored as their
// diagonals. Defaults are the circle-task values (M = I kg, B = 83.3 I Ns/m,
// K_a = I, w = C = (0.5, 0.5)/(1, 1), lambda = 1.02, rho_min = 15 mm).
struct ControllerParams {
  Vec3 M{1.0, 1.0, 1.0};           // kg
  Vec3 B{83.3, 83.3, 83.3};        // Ns/m
  Vec3 K_a{1.0, 1.0, 1.0};         // 1/s
  std::vector<double> w{0.5, 0.5}; // smoothness, directness
  std::vector<double> C{1.0, 1.0};
  double lambda = 1.02;
  double rho_min = 0.015;          // m
  double v_max = 0.25;             // m/s
  double filter_cutoff_hz = 2.0;
  double dt = 0.001;               // s
  double activity_threshold = 0.5; // N
  bool activity_gate = true;
  double gate_window = 0.2;        // s

  // Throws ConfigError naming the first violated invariant.
  void validate() const;
};

// Velocity-domain stand-in for an impedance-based assist-as-needed
// controller: free motion inside a deadband tube around the path, a linear
// pull back toward it outside, and a constant feed along the tangent.
struct ImpedanceParams {
  double deadband = 0.005;   // m
  double k_n = 2.0;          // 1/s
  double v_tangent = 0.02;   // m/s

  void validate() const;
};

}  // namespace sharedctl
