#include "sharedctl/session/telemetry.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sharedctl {

using nlohmann::json;

namespace {

class LineWriter {
 public:
  explicit LineWriter(std::string& buf) : buf_(buf) {}

  void key(const char* k) {
    buf_ += first_ ? "\"" : ",\"";
    buf_ += k;
    buf_ += "\":";
    first_ = false;
  }
  void num(double v) {
    char tmp[32];
    auto res = std::to_chars(tmp, tmp + sizeof tmp, v);
    buf_.append(tmp, res.ptr);
  }
  void field(const char* k, double v) {
    key(k);
    num(v);
  }
  void field(const char* k, int v) {
    key(k);
    buf_ += std::to_string(v);
  }
  void field(const char* k, bool v) {
    key(k);
    buf_ += v ? "true" : "false";
  }
  void field(const char* k, std::string_view v) {
    key(k);
    buf_ += '"';
    buf_ += v;
    buf_ += '"';
  }
  void field(const char* k, const Vec3& v) {
    key(k);
    buf_ += '[';
    num(v.x());
    buf_ += ',';
    num(v.y());
    buf_ += ',';
    num(v.z());
    buf_ += ']';
  }

 private:
  std::string& buf_;
  bool first_ = true;
};

void append_frame(std::string& buf, const ControlFrame& fr) {
  buf += '{';
  LineWriter w(buf);
  w.field("type", std::string_view("frame"));
  w.field("t", fr.t);
  w.field("x", fr.x);
  w.field("f", fr.f);
  w.field("v_h", fr.v_h);
  w.field("v_r", fr.v_r);
  w.field("v_hat_s", fr.v_hat_s);
  w.field("v_s", fr.v_s);
  w.field("eta_h", fr.eta_h);
  w.field("eta_r", fr.eta_r);
  w.field("eta_s", fr.eta_s);
  w.field("s_near", fr.s_near);
  w.field("s_c", fr.s_c);
  w.field("d", fr.d);
  w.field("goal", fr.goal);
  w.field("mode", to_string(fr.mode));
  w.field("loop", fr.loop);
  w.field("gate", fr.gate_open);
  w.field("degraded", fr.degraded);
  buf += "}\n";
}

Vec3 vec(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

ControlFrame parse_frame(const json& j) {
  ControlFrame fr;
  fr.t = j.at("t").get<double>();
  fr.x = vec(j.at("x"));
  fr.f = vec(j.at("f"));
  fr.v_h = vec(j.at("v_h"));
  fr.v_r = vec(j.at("v_r"));
  fr.v_hat_s = vec(j.at("v_hat_s"));
  fr.v_s = vec(j.at("v_s"));
  fr.eta_h = j.at("eta_h").get<double>();
  fr.eta_r = j.at("eta_r").get<double>();
  fr.eta_s = j.at("eta_s").get<double>();
  fr.s_near = j.at("s_near").get<double>();
  fr.s_c = j.at("s_c").get<double>();
  fr.d = j.at("d").get<double>();
  fr.goal = vec(j.at("goal"));
  const auto mode = parse_mode(j.at("mode").get<std::string>());
  if (!mode) throw std::runtime_error("unknown mode");
  fr.mode = *mode;
  fr.loop = j.at("loop").get<int>();
  fr.gate_open = j.at("gate").get<bool>();
  fr.degraded = j.at("degraded").get<bool>();
  return fr;
}

}  // namespace

void write_telemetry(std::ostream& out, const TrialRecord& record) {
  json header = {{"type", "header"},
                 {"v", kTelemetryVersion},
                 {"scenario", scenario_to_json(record.scenario)},
                 {"operator", record.operator_id},
                 {"hand", record.hand},
                 {"seed", record.seed}};
  out << header.dump() << '\n';
  std::string buf;
  buf.reserve(1 << 16);
  for (const auto& fr : record.frames) {
    append_frame(buf, fr);
    if (buf.size() > (1 << 15)) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  json footer = {{"type", "end"},
                 {"completed", record.completed},
                 {"loop_boundaries", record.loop_boundaries}};
  out << footer.dump() << '\n';
}

void write_telemetry_file(const std::filesystem::path& file, const TrialRecord& record) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  write_telemetry(out, record);
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

std::string telemetry_string(const TrialRecord& record) {
  std::ostringstream out;
  write_telemetry(out, record);
  return out.str();
}

TrialRecord read_telemetry(std::istream& in) {
  TrialRecord rec;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  bool have_end = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      if (have_end) throw std::runtime_error("content after end record");
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "frame") {
        if (!have_header) throw std::runtime_error("frame before header");
        rec.frames.push_back(parse_frame(j));
      } else if (type == "header") {
        if (have_header) throw std::runtime_error("duplicate header");
        if (j.at("v").get<int>() != kTelemetryVersion) {
          throw std::runtime_error("unsupported telemetry version");
        }
        rec.scenario = scenario_from_json(j.at("scenario"));
        rec.operator_id = j.value("operator", "");
        rec.hand = j.value("hand", "");
        rec.seed = j.value("seed", std::uint64_t{0});
        have_header = true;
      } else if (type == "end") {
        rec.completed = j.at("completed").get<bool>();
        rec.loop_boundaries = j.at("loop_boundaries").get<std::vector<std::size_t>>();
        have_end = true;
      } else {
        throw std::runtime_error("unknown record type '" + type + "'");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("telemetry line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw std::runtime_error("telemetry: missing header");
  if (!have_end) throw std::runtime_error("telemetry: missing end record (truncated log)");
  return rec;
}

TrialRecord read_telemetry_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  return read_telemetry(in);
}

}  // namespace sharedctl
