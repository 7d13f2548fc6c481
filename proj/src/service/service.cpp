#include "sharedctl/service/service.hpp"

#include <charconv>
#include <cstdlib>
#include <ctime>
#include <deque>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <nlohmann/json.hpp>

#include "sharedctl/session/telemetry.hpp"

namespace sharedctl::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using json = nlohmann::json;

namespace {

std::string iso8601_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string new_session_id() {
  static std::mutex mu;
  static std::mt19937_64 gen{[] {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }()};
  std::lock_guard lock(mu);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(gen()),
                static_cast<unsigned long long>(gen()));
  return buf;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json metrics_json(const TrialMetrics& m) {
  json out = json::object();
  const auto& names = metric_names();
  const auto values = metric_values(m);
  for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = values[i];
  return out;
}

std::string pacing_name(Pacing p) { return p == Pacing::RealTime ? "realtime" : "client"; }

}  // namespace

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::Waiting: return "waiting";
    case SessionState::Running: return "running";
    case SessionState::Done: return "done";
    case SessionState::Aborted: return "aborted";
  }
  return "?";
}

void apply_bind(ServiceConfig& cfg, const std::string& s, const std::string& field) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw ConfigError(field, "expected host:port, got '" + s + "'");
  }
  unsigned port = 0;
  const char* b = s.data() + colon + 1;
  const char* e = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(b, e, port);
  if (ec != std::errc() || ptr != e || b == e || port > 65535) {
    throw ConfigError(field, "bad port in '" + s + "'");
  }
  cfg.host = s.substr(0, colon);
  cfg.port = static_cast<unsigned short>(port);
}

ServiceConfig config_from_env(ServiceConfig cfg) {
  if (const char* bind = std::getenv("SHAREDCTL_BIND"); bind && *bind) {
    apply_bind(cfg, bind, "SHAREDCTL_BIND");
  }
  if (const char* dir = std::getenv("SHAREDCTL_DATA_DIR"); dir && *dir) cfg.data_dir = dir;
  if (const char* max = std::getenv("SHAREDCTL_MAX_SESSIONS"); max && *max) {
    const std::string s = max;
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc() || ptr != s.data() + s.size() || n == 0) {
      throw ConfigError("SHAREDCTL_MAX_SESSIONS", "expected a positive integer, got '" + s + "'");
    }
    cfg.max_sessions = n;
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Session

Session::Session(std::string id, Scenario scenario, Pacing pacing,
                 std::filesystem::path record_file, std::size_t outbound_capacity)
    : id_(std::move(id)),
      scenario_(std::move(scenario)),
      pacing_(pacing),
      created_at_(iso8601_now()),
      record_file_(std::move(record_file)),
      output_(outbound_capacity),
      unattended_since_(std::chrono::steady_clock::now()) {
  worker_ = std::thread([this] { run(); });
}

Session::~Session() {
  input_.close();
  join();
}

void Session::join() {
  if (worker_.joinable()) worker_.join();
}

void Session::run() {
  StreamOptions opts;
  opts.pacing = pacing_;
  opts.on_start = [this] {
    std::lock_guard lock(mu_);
    if (state_ == SessionState::Waiting) state_ = SessionState::Running;
  };
  TrialRecord rec;
  try {
    rec = stream_trial(scenario_, input_, output_, opts);
  } catch (const std::exception& e) {
    std::cerr << "session " << id_ << ": " << e.what() << "\n";
  }
  rec.operator_id = "client";
  try {
    write_telemetry_file(record_file_, rec);
  } catch (const std::exception& e) {
    std::cerr << "session " << id_ << ": " << e.what() << "\n";
  }
  std::optional<TrialMetrics> m;
  if (rec.completed) {
    try {
      m = compute_metrics(rec);
    } catch (const std::exception& e) {
      std::cerr << "session " << id_ << ": " << e.what() << "\n";
    }
  }
  {
    std::lock_guard lock(mu_);
    completed_ = rec.completed;
    metrics_ = m;
    if (state_ != SessionState::Aborted) state_ = SessionState::Done;
  }
  output_.close();
}

SessionState Session::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

bool Session::finished() const {
  // The output channel closes only after the final state is set.
  return output_.closed();
}

std::optional<TrialMetrics> Session::metrics() const {
  std::lock_guard lock(mu_);
  return metrics_;
}

bool Session::completed() const {
  std::lock_guard lock(mu_);
  return completed_;
}

json Session::descriptor() const {
  std::lock_guard lock(mu_);
  json d;
  d["id"] = id_;
  d["state"] = std::string(to_string(state_));
  d["created_at"] = created_at_;
  d["pacing"] = pacing_name(pacing_);
  d["scenario"] = scenario_to_json(scenario_);
  const bool ended = state_ == SessionState::Done || state_ == SessionState::Aborted;
  d["completed"] = ended ? json(completed_) : json(nullptr);
  d["metrics"] = metrics_ ? metrics_json(*metrics_) : json(nullptr);
  return d;
}

bool Session::try_attach() {
  std::lock_guard lock(mu_);
  if (attached_) return false;
  attached_ = true;
  return true;
}

void Session::detach() {
  std::lock_guard lock(mu_);
  attached_ = false;
  unattended_since_ = std::chrono::steady_clock::now();
}

double Session::unattended_for() const {
  std::lock_guard lock(mu_);
  if (attached_) return 0.0;
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - unattended_since_)
      .count();
}

void Session::abort() {
  {
    std::lock_guard lock(mu_);
    if (state_ == SessionState::Done || state_ == SessionState::Aborted) return;
    state_ = SessionState::Aborted;
  }
  input_.close();
}

// ---------------------------------------------------------------------------
// Network side

struct SessionService::Impl {
  explicit Impl(const ServiceConfig& c) : cfg(c), acceptor(ioc), sweep(ioc) {}

  ServiceConfig cfg;
  net::io_context ioc;
  tcp::acceptor acceptor;
  net::steady_timer sweep;
  std::thread io_thread;
  mutable std::mutex mu;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  std::mutex stop_mu;
  std::condition_variable stop_cv;
  bool stopped = false;

  std::shared_ptr<Session> find(const std::string& id) const {
    std::lock_guard lock(mu);
    auto it = sessions.find(id);
    return it == sessions.end() ? nullptr : it->second;
  }

  std::size_t active() const {
    std::lock_guard lock(mu);
    std::size_t n = 0;
    for (const auto& [id, s] : sessions) {
      const auto st = s->state();
      if (st == SessionState::Waiting || st == SessionState::Running) ++n;
    }
    return n;
  }

  void do_accept();
  void do_sweep();
  http::response<http::string_body> handle(const http::request<http::string_body>& req);
  http::response<http::string_body> create(const http::request<http::string_body>& req);
};

namespace {

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

Response make_response(const Request& req, http::status status, const std::string& body,
                       const std::string& content_type = "application/json") {
  Response res{status, req.version()};
  res.set(http::field::server, "sharedctl");
  res.set(http::field::content_type, content_type);
  res.set(http::field::access_control_allow_origin, "*");
  res.keep_alive(req.keep_alive());
  res.body() = body;
  res.prepare_payload();
  return res;
}

Response json_response(const Request& req, http::status status, const json& body) {
  return make_response(req, status, body.dump());
}

Response error_response(const Request& req, http::status status, const std::string& code,
                        const std::string& message, const std::string& field = {}) {
  json body{{"error", code}, {"message", message}};
  if (!field.empty()) body["field"] = field;
  return json_response(req, status, body);
}

// "/sessions/abc/io" -> {"sessions", "abc", "io"}; query strings are ignored.
std::vector<std::string> split_target(std::string_view target) {
  if (auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < target.size()) {
    while (i < target.size() && target[i] == '/') ++i;
    std::size_t j = i;
    while (j < target.size() && target[j] != '/') ++j;
    if (j > i) parts.emplace_back(target.substr(i, j - i));
    i = j;
  }
  return parts;
}

std::string frame_message(const FrameSummary& f) {
  json m;
  m["v"] = kWireVersion;
  m["type"] = "frame";
  m["t"] = f.t;
  m["x"] = vec_json(f.x);
  m["goal"] = vec_json(f.goal);
  m["path_progress"] = f.path_progress;
  m["eta_h"] = f.eta_h;
  m["eta_r"] = f.eta_r;
  m["eta_s"] = f.eta_s;
  m["v_s"] = vec_json(f.v_s);
  m["disagreement_instant"] = f.disagreement_instant;
  m["loop"] = f.loop;
  m["mode"] = std::string(to_string(f.mode));
  m["gate_open"] = f.gate_open;
  return m.dump();
}

std::string done_message(const Session& s) {
  const auto m = s.metrics();
  json d;
  d["v"] = kWireVersion;
  d["type"] = "done";
  d["state"] = std::string(to_string(s.state()));
  d["completed"] = s.completed();
  d["metrics"] = m ? metrics_json(*m) : json(nullptr);
  return d.dump();
}

std::string error_message(const std::string& code, const std::string& message) {
  return json{{"v", kWireVersion}, {"type", "error"}, {"code", code}, {"message", message}}.dump();
}

// Parses one inbound force sample. Throws std::invalid_argument.
ForceMessage parse_force(const json& m) {
  ForceMessage f;
  auto num = [&](const char* key) {
    auto it = m.find(key);
    if (it == m.end() || !it->is_number()) {
      throw std::invalid_argument(std::string("missing numeric field '") + key + "'");
    }
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(key) + " is not finite");
    return v;
  };
  f.t = num("t");
  f.f = Vec3(num("fx"), num("fy"), num("fz"));
  return f;
}

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket socket, std::shared_ptr<Session> session)
      : ws_(std::move(socket)), session_(std::move(session)), timer_(ws_.get_executor()) {}

  void run(Request req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) {
        self->session_->detach();
        return;
      }
      self->on_open();
    });
  }

 private:
  // Outbound frames are pulled from the session only while fewer than this
  // many messages wait on the socket, so a slow client backs up into the
  // session channel where decimation adapts.
  static constexpr std::size_t kMaxPending = 4;

  void on_open() {
    json hello{{"v", kWireVersion},
               {"type", "hello"},
               {"id", session_->id()},
               {"state", std::string(to_string(session_->state()))},
               {"mode", std::string(to_string(session_->scenario().mode))},
               {"pacing", pacing_name(session_->pacing())},
               {"dt", session_->scenario().params.dt}};
    enqueue(hello.dump());
    do_read();
    poll();
  }

  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->on_closed();
        return;
      }
      self->on_message(beast::buffers_to_string(self->buffer_.data()));
      self->buffer_.consume(self->buffer_.size());
      self->do_read();
    });
  }

  void on_message(const std::string& text) {
    json m;
    try {
      m = json::parse(text);
    } catch (const json::exception&) {
      enqueue(error_message("bad_message", "not valid JSON"));
      return;
    }
    if (!m.is_object()) {
      enqueue(error_message("bad_message", "expected an object"));
      return;
    }
    if (m.value("v", 0) != kWireVersion) {
      enqueue(error_message("bad_version", "expected v = " + std::to_string(kWireVersion)));
      return;
    }
    const std::string type = m.value("type", std::string("force"));
    if (type == "force") {
      try {
        session_->input().push(parse_force(m));
      } catch (const std::exception& e) {
        enqueue(error_message("bad_message", e.what()));
      }
    } else if (type == "end") {
      session_->input().close();
    } else if (type == "mode" || type == "config") {
      enqueue(error_message("rejected", "the scenario of a session cannot change"));
    } else {
      enqueue(error_message("bad_message", "unknown type '" + type + "'"));
    }
  }

  void poll() {
    if (closed_) return;
    while (pending_.size() < kMaxPending) {
      auto f = session_->output().try_pop();
      if (!f) break;
      enqueue(frame_message(*f));
    }
    if (!done_sent_ && session_->output().exhausted()) {
      done_sent_ = true;
      enqueue(done_message(*session_));
      return;
    }
    timer_.expires_after(std::chrono::milliseconds(5));
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (!ec) self->poll();
    });
  }

  void enqueue(std::string msg) {
    if (closed_) return;
    pending_.push_back(std::move(msg));
    if (!writing_) write_next();
  }

  void write_next() {
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(pending_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->on_closed();
                        return;
                      }
                      self->pending_.pop_front();
                      if (!self->pending_.empty()) {
                        self->write_next();
                        return;
                      }
                      self->writing_ = false;
                      if (self->done_sent_ && !self->closing_) {
                        self->closing_ = true;
                        self->ws_.async_close(websocket::close_code::normal,
                                              [self](beast::error_code) { self->on_closed(); });
                      }
                    });
  }

  void on_closed() {
    if (closed_) return;
    closed_ = true;
    timer_.cancel();
    session_->detach();
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::shared_ptr<Session> session_;
  net::steady_timer timer_;
  std::deque<std::string> pending_;
  bool writing_ = false;
  bool done_sent_ = false;
  bool closing_ = false;
  bool closed_ = false;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket socket, SessionService::Impl& svc)
      : stream_(std::move(socket)), svc_(svc) {}

  void run() {
    net::dispatch(stream_.get_executor(), [self = shared_from_this()] { self->do_read(); });
  }

 private:
  void do_read() {
    parser_.emplace();
    parser_->body_limit(4 * 1024 * 1024);
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, *parser_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       self->on_read(ec);
                     });
  }

  void on_read(beast::error_code ec) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;
    Request req = parser_->release();
    if (websocket::is_upgrade(req)) {
      upgrade(std::move(req));
      return;
    }
    Response res;
    try {
      res = svc_.handle(req);
    } catch (const std::exception& e) {
      res = error_response(req, http::status::internal_server_error, "internal", e.what());
    }
    send(std::move(res));
  }

  void upgrade(Request req) {
    const auto parts = split_target(std::string_view(req.target().data(), req.target().size()));
    if (parts.size() != 3 || parts[0] != "sessions" || parts[2] != "io") {
      send(error_response(req, http::status::not_found, "not_found", "no such endpoint"));
      return;
    }
    auto session = svc_.find(parts[1]);
    if (!session) {
      send(error_response(req, http::status::not_found, "not_found", "unknown session"));
      return;
    }
    if (!session->try_attach()) {
      send(error_response(req, http::status::conflict, "busy", "a client is already attached"));
      return;
    }
    stream_.expires_never();
    std::make_shared<WsConnection>(stream_.release_socket(), std::move(session))
        ->run(std::move(req));
  }

  void send(Response res) {
    auto sp = std::make_shared<Response>(std::move(res));
    http::async_write(stream_, *sp,
                      [self = shared_from_this(), sp](beast::error_code ec, std::size_t) {
                        if (ec) return;
                        if (sp->need_eof()) {
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
                          return;
                        }
                        self->do_read();
                      });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  std::optional<http::request_parser<http::string_body>> parser_;
  SessionService::Impl& svc_;
};

}  // namespace

void SessionService::Impl::do_accept() {
  acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec == net::error::operation_aborted) return;
    if (!ec) std::make_shared<HttpConnection>(std::move(socket), *this)->run();
    do_accept();
  });
}

void SessionService::Impl::do_sweep() {
  sweep.expires_after(std::chrono::milliseconds(100));
  sweep.async_wait([this](beast::error_code ec) {
    if (ec) return;
    std::vector<std::shared_ptr<Session>> all;
    {
      std::lock_guard lock(mu);
      for (const auto& [id, s] : sessions) all.push_back(s);
    }
    for (const auto& s : all) {
      const auto st = s->state();
      if ((st == SessionState::Waiting || st == SessionState::Running) &&
          s->unattended_for() > cfg.disconnect_timeout_s) {
        s->abort();
      }
    }
    do_sweep();
  });
}

Response SessionService::Impl::create(const Request& req) {
  json doc;
  try {
    doc = json::parse(req.body().empty() ? std::string("{}") : req.body());
  } catch (const json::exception& e) {
    return error_response(req, http::status::bad_request, "invalid_json", e.what());
  }
  if (!doc.is_object()) {
    return error_response(req, http::status::bad_request, "invalid_config",
                          "expected a JSON object");
  }
  Pacing pacing = Pacing::RealTime;
  if (auto it = doc.find("pacing"); it != doc.end()) {
    const std::string p = it->is_string() ? it->get<std::string>() : std::string();
    if (p == "realtime") {
      pacing = Pacing::RealTime;
    } else if (p == "client") {
      pacing = Pacing::Virtual;
    } else {
      return error_response(req, http::status::bad_request, "invalid_config",
                            "expected \"realtime\" or \"client\"", "pacing");
    }
    doc.erase(it);
  }
  if (doc.contains("path_file")) {
    return error_response(req, http::status::bad_request, "invalid_config",
                          "server-side files cannot be referenced; send \"path\" inline",
                          "path_file");
  }
  Scenario scenario;
  try {
    scenario = scenario_from_json(doc);
    scenario.validate();
  } catch (const ConfigError& e) {
    return error_response(req, http::status::bad_request, "invalid_config", e.what(), e.field());
  } catch (const std::exception& e) {
    return error_response(req, http::status::bad_request, "invalid_config", e.what());
  }

  std::lock_guard lock(mu);
  std::size_t live = 0;
  for (const auto& [id, s] : sessions) {
    const auto st = s->state();
    if (st == SessionState::Waiting || st == SessionState::Running) ++live;
  }
  if (live >= cfg.max_sessions) {
    return error_response(req, http::status::service_unavailable, "too_many_sessions",
                          "limit of " + std::to_string(cfg.max_sessions) + " live sessions");
  }
  const std::string id = new_session_id();
  auto session = std::make_shared<Session>(id, std::move(scenario), pacing,
                                           cfg.data_dir / (id + ".jsonl"), cfg.outbound_capacity);
  sessions.emplace(id, session);
  auto res = json_response(req, http::status::created, session->descriptor());
  res.set(http::field::location, "/sessions/" + id);
  return res;
}

Response SessionService::Impl::handle(const Request& req) {
  const auto parts = split_target(std::string_view(req.target().data(), req.target().size()));
  const auto method = req.method();

  if (method == http::verb::options) {
    auto res = make_response(req, http::status::no_content, "");
    res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
    res.set(http::field::access_control_allow_headers, "Content-Type");
    return res;
  }
  if (parts.size() == 1 && parts[0] == "healthz") {
    if (method != http::verb::get) {
      return error_response(req, http::status::method_not_allowed, "method", "use GET");
    }
    return json_response(req, http::status::ok,
                         {{"status", "ok"}, {"active_sessions", active()}});
  }
  if (parts.empty() || parts[0] != "sessions") {
    return error_response(req, http::status::not_found, "not_found", "no such endpoint");
  }
  if (parts.size() == 1) {
    if (method == http::verb::post) return create(req);
    if (method == http::verb::get) {
      json list = json::array();
      std::lock_guard lock(mu);
      for (const auto& [id, s] : sessions) {
        list.push_back({{"id", id}, {"state", std::string(to_string(s->state()))}});
      }
      return json_response(req, http::status::ok, list);
    }
    return error_response(req, http::status::method_not_allowed, "method", "use GET or POST");
  }
  if (method != http::verb::get) {
    return error_response(req, http::status::method_not_allowed, "method", "use GET");
  }
  auto session = find(parts[1]);
  if (!session) return error_response(req, http::status::not_found, "not_found", "unknown session");
  if (parts.size() == 2) return json_response(req, http::status::ok, session->descriptor());
  if (parts.size() == 3 && parts[2] == "record") {
    if (!session->finished()) {
      return error_response(req, http::status::conflict, "not_finished",
                            "the record is available once the session ends");
    }
    std::ifstream in(session->record_file(), std::ios::binary);
    if (!in) {
      return error_response(req, http::status::internal_server_error, "missing_record",
                            "record file could not be read");
    }
    std::ostringstream body;
    body << in.rdbuf();
    return make_response(req, http::status::ok, body.str(), "application/x-ndjson");
  }
  if (parts.size() == 3 && parts[2] == "io") {
    return error_response(req, http::status::upgrade_required, "upgrade_required",
                          "open a WebSocket on this endpoint");
  }
  return error_response(req, http::status::not_found, "not_found", "no such endpoint");
}

// ---------------------------------------------------------------------------

SessionService::SessionService(ServiceConfig config)
    : config_(std::move(config)), impl_(std::make_unique<Impl>(config_)) {}

SessionService::~SessionService() {
  stop();
  std::lock_guard lock(impl_->mu);
  impl_->sessions.clear();
}

void SessionService::start() {
  std::filesystem::create_directories(config_.data_dir);
  const auto address = net::ip::make_address(config_.host);
  tcp::endpoint ep{address, config_.port};
  impl_->acceptor.open(ep.protocol());
  impl_->acceptor.set_option(net::socket_base::reuse_address(true));
  impl_->acceptor.bind(ep);
  impl_->acceptor.listen(net::socket_base::max_listen_connections);
  port_ = impl_->acceptor.local_endpoint().port();
  impl_->do_accept();
  impl_->do_sweep();
  impl_->io_thread = std::thread([this] { impl_->ioc.run(); });
}

void SessionService::wait() {
  std::unique_lock lock(impl_->stop_mu);
  impl_->stop_cv.wait(lock, [&] { return impl_->stopped; });
}

void SessionService::stop() {
  {
    std::lock_guard lock(impl_->stop_mu);
    if (impl_->stopped) return;
    impl_->stopped = true;
  }
  impl_->stop_cv.notify_all();
  impl_->ioc.stop();
  if (impl_->io_thread.joinable()) impl_->io_thread.join();
  // Abort first so every session persists its record before we return.
  std::vector<std::shared_ptr<Session>> all;
  {
    std::lock_guard lock(impl_->mu);
    for (const auto& [id, s] : impl_->sessions) all.push_back(s);
  }
  for (const auto& s : all) s->abort();
  for (const auto& s : all) s->join();
}

std::shared_ptr<Session> SessionService::find(const std::string& id) const {
  return impl_->find(id);
}

}  // namespace sharedctl::service
