#include "sharedctl/session/scenario.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace sharedctl {

using nlohmann::json;

void Scenario::validate() const {
  params.validate();
  imp.validate();
  if (discard_loops < 0) throw ConfigError("discard_loops", "must be >= 0");
  if (loops_required <= discard_loops) {
    throw ConfigError("loops_required", "must be greater than discard_loops");
  }
  if (!(timeout > 0.0) || !std::isfinite(timeout)) throw ConfigError("timeout_s", "must be > 0");
  if (plane_lock && (*plane_lock < 0 || *plane_lock > 2)) {
    throw ConfigError("plane_lock", "must be x, y or z");
  }
  if (rmspe_radius && !(*rmspe_radius > 0.0)) throw ConfigError("rmspe_radius", "must be > 0");
}

namespace {

double number(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

Vec3 diagonal(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (v.is_number()) {
    const double d = v.get<double>();
    return {d, d, d};
  }
  if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() && v[2].is_number()) {
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  }
  throw ConfigError(key, "expected a number or a 3-element diagonal");
}

int axis_index(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "x") return 0;
    if (s == "y") return 1;
    if (s == "z") return 2;
  }
  throw ConfigError("plane_lock", "expected \"x\", \"y\", \"z\" or null");
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "path", "path_file", "mode", "M", "B", "K_a", "w1", "w2", "C1", "C2", "lambda",
      "rho_min", "v_max", "filter_cutoff_hz", "dt", "activity_threshold_n", "activity_gate",
      "gate_window_s", "imp.deadband", "imp.k_n", "imp.v_tangent", "loops_required",
      "discard_loops", "timeout_s", "plane_lock", "rmspe_radius", "pacing"};
  return keys;
}

}  // namespace

Scenario scenario_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("<root>", "scenario config must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (!known_keys().count(key)) throw ConfigError(key, "unknown key");
  }
  Scenario sc;
  try {
    if (doc.contains("path")) {
      sc.path = path_from_json(doc["path"]);
    } else if (doc.contains("path_file")) {
      auto file = std::filesystem::path(doc["path_file"].get<std::string>());
      if (file.is_relative()) file = base_dir / file;
      sc.path = load_path_file(file);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(doc.contains("path") ? "path" : "path_file", e.what());
  }
  if (doc.contains("mode")) {
    const auto& m = doc["mode"];
    auto mode = m.is_string() ? parse_mode(m.get<std::string>()) : std::nullopt;
    if (!mode) throw ConfigError("mode", "expected standalone, shared or impedance");
    sc.mode = *mode;
  }
  auto& p = sc.params;
  if (doc.contains("M")) p.M = diagonal(doc, "M");
  if (doc.contains("B")) p.B = diagonal(doc, "B");
  if (doc.contains("K_a")) p.K_a = diagonal(doc, "K_a");
  if (doc.contains("w1")) p.w[0] = number(doc, "w1");
  if (doc.contains("w2")) p.w[1] = number(doc, "w2");
  if (doc.contains("C1")) p.C[0] = number(doc, "C1");
  if (doc.contains("C2")) p.C[1] = number(doc, "C2");
  if (doc.contains("lambda")) p.lambda = number(doc, "lambda");
  if (doc.contains("rho_min")) p.rho_min = number(doc, "rho_min");
  if (doc.contains("v_max")) p.v_max = number(doc, "v_max");
  if (doc.contains("filter_cutoff_hz")) p.filter_cutoff_hz = number(doc, "filter_cutoff_hz");
  if (doc.contains("dt")) p.dt = number(doc, "dt");
  if (doc.contains("activity_threshold_n")) p.activity_threshold = number(doc, "activity_threshold_n");
  if (doc.contains("gate_window_s")) p.gate_window = number(doc, "gate_window_s");
  if (doc.contains("activity_gate")) {
    if (!doc["activity_gate"].is_boolean()) throw ConfigError("activity_gate", "expected a boolean");
    p.activity_gate = doc["activity_gate"].get<bool>();
  }
  if (doc.contains("imp.deadband")) sc.imp.deadband = number(doc, "imp.deadband");
  if (doc.contains("imp.k_n")) sc.imp.k_n = number(doc, "imp.k_n");
  if (doc.contains("imp.v_tangent")) sc.imp.v_tangent = number(doc, "imp.v_tangent");
  if (doc.contains("loops_required")) sc.loops_required = static_cast<int>(number(doc, "loops_required"));
  if (doc.contains("discard_loops")) sc.discard_loops = static_cast<int>(number(doc, "discard_loops"));
  if (doc.contains("timeout_s")) sc.timeout = number(doc, "timeout_s");
  if (doc.contains("plane_lock")) {
    sc.plane_lock = doc["plane_lock"].is_null() ? std::nullopt
                                                : std::optional<int>(axis_index(doc["plane_lock"]));
  }
  if (doc.contains("rmspe_radius")) sc.rmspe_radius = number(doc, "rmspe_radius");
  sc.validate();
  return sc;
}

Scenario load_scenario_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("<file>", "cannot open scenario file " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("<file>", file.string() + ": " + e.what());
  }
  return scenario_from_json(doc, file.parent_path());
}

json scenario_to_json(const Scenario& sc) {
  auto vec = [](const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); };
  json pts = json::array();
  for (const auto& s : sc.path.samples()) pts.push_back(vec(s));
  json doc;
  doc["path"] = {{"points", std::move(pts)},
                 {"closed", sc.path.closed()},
                 {"exact", true},
                 {"characteristic_radius", sc.path.characteristic_radius()}};
  doc["mode"] = std::string(to_string(sc.mode));
  const auto& p = sc.params;
  doc["M"] = vec(p.M);
  doc["B"] = vec(p.B);
  doc["K_a"] = vec(p.K_a);
  doc["w1"] = p.w[0];
  doc["w2"] = p.w[1];
  doc["C1"] = p.C[0];
  doc["C2"] = p.C[1];
  doc["lambda"] = p.lambda;
  doc["rho_min"] = p.rho_min;
  doc["v_max"] = p.v_max;
  doc["filter_cutoff_hz"] = p.filter_cutoff_hz;
  doc["dt"] = p.dt;
  doc["activity_threshold_n"] = p.activity_threshold;
  doc["activity_gate"] = p.activity_gate;
  doc["gate_window_s"] = p.gate_window;
  doc["imp.deadband"] = sc.imp.deadband;
  doc["imp.k_n"] = sc.imp.k_n;
  doc["imp.v_tangent"] = sc.imp.v_tangent;
  doc["loops_required"] = sc.loops_required;
  doc["discard_loops"] = sc.discard_loops;
  doc["timeout_s"] = sc.timeout;
  doc["plane_lock"] = sc.plane_lock ? json(std::string(1, "xyz"[*sc.plane_lock])) : json(nullptr);
  if (sc.rmspe_radius) doc["rmspe_radius"] = *sc.rmspe_radius;
  return doc;
}

}  // namespace sharedctl
