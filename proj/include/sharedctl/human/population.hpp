#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sharedctl/human/operator.hpp"

namespace sharedctl {

// {"operators": [{"id": "V01", "skill": 0.8, ...}, ...]}. Keys are the
// OperatorProfile field names; omitted keys keep their defaults, unknown keys
// are rejected. Throws ConfigError ("operators[i].key").
std::vector<OperatorProfile> population_from_json(const nlohmann::json& doc);
nlohmann::json population_to_json(const std::vector<OperatorProfile>& population);

std::vector<OperatorProfile> load_population_file(const std::filesystem::path& file);
void save_population_file(const std::filesystem::path& file,
                          const std::vector<OperatorProfile>& population);

}  // namespace sharedctl
