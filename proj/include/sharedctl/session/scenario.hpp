#pragma once

#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "sharedctl/core/params.hpp"
#include "sharedctl/core/path.hpp"

namespace sharedctl {

struct Scenario {
  PathSpec path = make_circle_path({});
  Mode mode = Mode::Shared;
  ControllerParams params;
  ImpedanceParams imp;
  int loops_required = 4;
  int discard_loops = 1;
  double timeout = 120.0;               // s
  std::optional<int> plane_lock = 2;    // axis index zeroed in v_s; z by default
  std::optional<double> rmspe_radius;   // overrides the path's characteristic radius

  // Throws ConfigError.
  void validate() const;
  double reference_radius() const {
    return rmspe_radius ? *rmspe_radius : path.characteristic_radius();
  }
};

// Flat-key scenario config. Recognised keys: path | path_file, mode, M, B,
// K_a (scalar or [x,y,z]), w1, w2, C1, C2, lambda, rho_min, v_max,
// filter_cutoff_hz, dt, activity_threshold_n, activity_gate, gate_window_s,
// imp.deadband, imp.k_n, imp.v_tangent, loops_required, discard_loops,
// timeout_s, plane_lock ("x" | "y" | "z" | null), rmspe_radius.
// Unknown keys are rejected. Throws ConfigError with the offending key.
Scenario scenario_from_json(const nlohmann::json& doc,
                            const std::filesystem::path& base_dir = {});
Scenario load_scenario_file(const std::filesystem::path& file);

// Serialises with the path as an explicit sample list so the result reloads
// to an identical Scenario.
nlohmann::json scenario_to_json(const Scenario& scenario);

}  // namespace sharedctl
