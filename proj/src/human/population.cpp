#include "sharedctl/human/population.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "sharedctl/core/params.hpp"

namespace sharedctl {

using json = nlohmann::json;

namespace {

struct Field {
  const char* name;
  double OperatorProfile::*member;
};

constexpr Field kFields[] = {
    {"skill", &OperatorProfile::skill},
    {"reaction_delay", &OperatorProfile::reaction_delay},
    {"preview", &OperatorProfile::preview},
    {"k_track", &OperatorProfile::k_track},
    {"f_max", &OperatorProfile::f_max},
    {"noise_std", &OperatorProfile::noise_std},
    {"tremor_hz", &OperatorProfile::tremor_hz},
    {"tremor_amp", &OperatorProfile::tremor_amp},
    {"hand_penalty", &OperatorProfile::hand_penalty},
    {"speed", &OperatorProfile::speed},
    {"shape_bias", &OperatorProfile::shape_bias},
    {"b_ff", &OperatorProfile::b_ff},
    {"b_fb", &OperatorProfile::b_fb},
};

OperatorProfile profile_from_json(const json& doc, const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where, "expected an object");
  OperatorProfile p;
  for (const auto& [key, value] : doc.items()) {
    const std::string field = where + "." + key;
    if (key == "id") {
      if (!value.is_string() || value.get<std::string>().empty()) {
        throw ConfigError(field, "expected a non-empty string");
      }
      p.id = value.get<std::string>();
      continue;
    }
    if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError(field, "expected an unsigned integer");
      p.seed = value.get<std::uint64_t>();
      continue;
    }
    bool known = false;
    for (const auto& f : kFields) {
      if (key != f.name) continue;
      if (!value.is_number()) throw ConfigError(field, "expected a number");
      p.*f.member = value.get<double>();
      known = true;
      break;
    }
    if (!known) throw ConfigError(field, "unknown key");
  }
  try {
    p.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(where + "." + e.field(), e.what());
  }
  return p;
}

}  // namespace

std::vector<OperatorProfile> population_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("operators")) {
    throw ConfigError("operators", "expected {\"operators\": [...]}");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "operators") throw ConfigError(key, "unknown key");
  }
  const json& ops = doc["operators"];
  if (!ops.is_array() || ops.empty()) throw ConfigError("operators", "expected a non-empty array");
  std::vector<OperatorProfile> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string where = "operators[" + std::to_string(i) + "]";
    out.push_back(profile_from_json(ops[i], where));
    if (!ids.insert(out.back().id).second) throw ConfigError(where + ".id", "duplicate id");
  }
  return out;
}

json population_to_json(const std::vector<OperatorProfile>& population) {
  json ops = json::array();
  for (const auto& p : population) {
    json o;
    o["id"] = p.id;
    for (const auto& f : kFields) o[f.name] = p.*f.member;
    o["seed"] = p.seed;
    ops.push_back(std::move(o));
  }
  return json{{"operators", std::move(ops)}};
}

std::vector<OperatorProfile> load_population_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("<file>", "cannot open population file " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("<file>", file.string() + ": " + e.what());
  }
  return population_from_json(doc);
}

void save_population_file(const std::filesystem::path& file,
                          const std::vector<OperatorProfile>& population) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << population_to_json(population).dump(2) << "\n";
}

}  // namespace sharedctl
