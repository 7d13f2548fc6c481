#include "sharedctl/core/params.hpp"

#include <cmath>
#include <numeric>

namespace sharedctl {

namespace {

void require(bool ok, const char* field, const char* message) {
  if (!ok) throw ConfigError(field, message);
}

bool positive_diag(const Vec3& v) {
  return all_finite(v) && v.x() > 0.0 && v.y() > 0.0 && v.z() > 0.0;
}

}  // namespace

void ControllerParams::validate() const {
  require(positive_diag(M), "M", "diagonal entries must be > 0");
  require(positive_diag(B), "B", "diagonal entries must be > 0");
  require(positive_diag(K_a), "K_a", "diagonal entries must be > 0");
  require(w.size() == 2 && C.size() == 2, "w", "expects two factors (smoothness, directness)");
  for (double wi : w) require(std::isfinite(wi) && wi >= 0.0, "w", "weights must be >= 0");
  require(std::accumulate(w.begin(), w.end(), 0.0) > 0.0, "w", "weights must not all be 0");
  for (double ci : C) require(std::isfinite(ci) && ci > 0.0, "C", "slope constants must be > 0");
  require(std::isfinite(lambda) && lambda > 1.0, "lambda", "must satisfy lambda > 1");
  require(std::isfinite(rho_min) && rho_min > 0.0, "rho_min", "must be > 0");
  require(std::isfinite(v_max) && v_max > 0.0, "v_max", "must be > 0");
  require(std::isfinite(filter_cutoff_hz) && filter_cutoff_hz > 0.0, "filter_cutoff_hz", "must be > 0");
  require(std::isfinite(dt) && dt > 0.0, "dt", "must be > 0");
  require(std::isfinite(activity_threshold) && activity_threshold >= 0.0, "activity_threshold_n",
          "must be >= 0");
  require(std::isfinite(gate_window) && gate_window >= 0.0, "gate_window_s", "must be >= 0");
}

void ImpedanceParams::validate() const {
  require(std::isfinite(deadband) && deadband >= 0.0, "imp.deadband", "must be >= 0");
  require(std::isfinite(k_n) && k_n >= 0.0, "imp.k_n", "must be >= 0");
  require(std::isfinite(v_tangent) && v_tangent >= 0.0, "imp.v_tangent", "must be >= 0");
}

}  // namespace sharedctl
