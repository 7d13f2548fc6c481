#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <nlohmann/json_fwd.hpp>

#include "sharedctl/harness/metrics.hpp"
#include "sharedctl/session/stream.hpp"

namespace sharedctl::service {

// Wire protocol version carried in every WebSocket message as "v".
inline constexpr int kWireVersion = 1;

struct ServiceConfig {
  std::string host = "127.0.0.1";
  unsigned short port = 8080;               // 0 picks a free port
  std::filesystem::path data_dir = "sessions";
  std::size_t max_sessions = 8;             // concurrent Waiting + Running
  double disconnect_timeout_s = 10.0;       // no client for this long -> Aborted
  std::size_t outbound_capacity = 256;      // frame summaries buffered per session
};

// SHAREDCTL_BIND ("host:port"), SHAREDCTL_DATA_DIR, SHAREDCTL_MAX_SESSIONS
// override the given defaults. Throws ConfigError on malformed values.
ServiceConfig config_from_env(ServiceConfig defaults = {});
// Sets host and port from "host:port"; ConfigError names `field` otherwise.
void apply_bind(ServiceConfig& cfg, const std::string& bind, const std::string& field);

enum class SessionState { Waiting, Running, Done, Aborted };
std::string_view to_string(SessionState s);

// One live trial. The worker thread owns the control loop; the network side
// only touches the two channels and the guarded fields below.
class Session {
 public:
  Session(std::string id, Scenario scenario, Pacing pacing, std::filesystem::path record_file,
          std::size_t outbound_capacity);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  const Scenario& scenario() const { return scenario_; }
  Pacing pacing() const { return pacing_; }
  const std::string& created_at() const { return created_at_; }
  const std::filesystem::path& record_file() const { return record_file_; }

  SessionState state() const;
  bool finished() const;
  std::optional<TrialMetrics> metrics() const;
  bool completed() const;
  nlohmann::json descriptor() const;

  Channel<ForceMessage>& input() { return input_; }
  Channel<FrameSummary>& output() { return output_; }

  // At most one client at a time.
  bool try_attach();
  void detach();
  // Seconds without an attached client; 0 while attached.
  double unattended_for() const;

  // Ends the trial early; the partial record is still persisted.
  void abort();
  void join();

 private:
  void run();

  std::string id_;
  Scenario scenario_;
  Pacing pacing_;
  std::string created_at_;
  std::filesystem::path record_file_;
  Channel<ForceMessage> input_;
  Channel<FrameSummary> output_;

  mutable std::mutex mu_;
  SessionState state_ = SessionState::Waiting;
  std::optional<TrialMetrics> metrics_;
  bool completed_ = false;
  bool attached_ = false;
  std::chrono::steady_clock::time_point unattended_since_;
  std::thread worker_;
};

// HTTP + WebSocket gateway. Endpoints:
//   POST /sessions              body = scenario config (+ "pacing": "realtime" | "client")
//   GET  /sessions              list of {id, state}
//   GET  /sessions/{id}         descriptor
//   GET  /sessions/{id}/record  telemetry log (JSONL) once the session ended
//   GET  /sessions/{id}/io      WebSocket upgrade, see README for messages
//   GET  /healthz
class SessionService {
 public:
  explicit SessionService(ServiceConfig config);
  ~SessionService();

  // Binds and starts serving on a background thread.
  void start();
  // Blocks until stop() is called (or forever).
  void wait();
  void stop();
  unsigned short port() const { return port_; }

  std::shared_ptr<Session> find(const std::string& id) const;

  struct Impl;

 private:
  ServiceConfig config_;
  unsigned short port_ = 0;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sharedctl::service
