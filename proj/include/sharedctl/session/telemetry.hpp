#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sharedctl/session/trial.hpp"

namespace sharedctl {

// Line-delimited telemetry log, one JSON object per line:
//   {"type":"header","v":1,"scenario":{...},"operator":..,"hand":..,"seed":..}
//   {"type":"frame","t":..,"x":[..],"f":[..],"v_h":[..],"v_r":[..],"v_hat_s":[..],
//    "v_s":[..],"eta_h":..,"eta_r":..,"eta_s":..,"s_near":..,"s_c":..,"d":..,
//    "goal":[..],"mode":"shared","loop":..,"gate":true,"degraded":false}   (per tick)
//   {"type":"end","completed":true,"loop_boundaries":[..]}
// Numbers are written in shortest round-trip form, so reading a log back
// yields bit-identical doubles.
inline constexpr int kTelemetryVersion = 1;

void write_telemetry(std::ostream& out, const TrialRecord& record);
void write_telemetry_file(const std::filesystem::path& file, const TrialRecord& record);
std::string telemetry_string(const TrialRecord& record);

// Throws std::runtime_error with the offending line number on malformed input.
TrialRecord read_telemetry(std::istream& in);
TrialRecord read_telemetry_file(const std::filesystem::path& file);

}  // namespace sharedctl
