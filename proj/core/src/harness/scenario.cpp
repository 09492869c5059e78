#include "signcast/harness/scenario.hpp"

#include <fcntl.h>
#include <netinet/in.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "signcast/errors.hpp"
#include "signcast/nodes/http_client.hpp"
#include "signcast/nodes/smart_device.hpp"
#include "signcast/nodes/trusted_authority.hpp"
#include "signcast/policy/parser.hpp"

extern char** environ;

namespace signcast::harness {

std::string_view ToString(ScenarioFault fault) {
  switch (fault) {
    case ScenarioFault::kNone: return "none";
    case ScenarioFault::kTamperPayload: return "tamper-payload";
    case ScenarioFault::kCorruptPayload: return "corrupt-payload";
    case ScenarioFault::kStaleReplay: return "stale-replay";
  }
  return "?";
}

ScenarioFault ParseScenarioFault(std::string_view text) {
  for (auto f : {ScenarioFault::kNone, ScenarioFault::kTamperPayload, ScenarioFault::kCorruptPayload,
                 ScenarioFault::kStaleReplay}) {
    if (ToString(f) == text) return f;
  }
  throw ConfigError("unknown scenario fault: " + std::string(text));
}

// ---------------------------------------------------------------- config

namespace {

template <typename T>
T Get(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("scenario config: bad value for '") + key + "'");
  }
}

}  // namespace

ScenarioConfig ScenarioConfig::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
  ScenarioConfig c;
  c.profile = crypto::ParseCurveProfile(Get<std::string>(j, "profile", "SS512"));
  c.seed = Get<std::uint64_t>(j, "seed", c.seed);
  c.slot_seconds = Get<std::uint64_t>(j, "slot_seconds", c.slot_seconds);
  c.freshness_slots = Get<std::uint64_t>(j, "freshness_slots", c.freshness_slots);
  c.validators = Get<std::size_t>(j, "validators", c.validators);
  c.quorum = Get<std::size_t>(j, "quorum", c.quorum);
  c.base_port = Get<int>(j, "base_port", c.base_port);
  c.fault = ParseScenarioFault(Get<std::string>(j, "fault", "none"));
  c.max_latency_slots = Get<std::uint64_t>(j, "max_latency_slots", c.max_latency_slots);
  c.tick_ms = Get<int>(j, "tick_ms", c.tick_ms);
  if (c.slot_seconds == 0) throw ConfigError("scenario config: slot_seconds must be positive");
  if (c.validators == 0) throw ConfigError("scenario config: at least one validator");
  if (c.quorum > c.validators) throw ConfigError("scenario config: quorum exceeds validator count");
  if (c.base_port < 0 || c.base_port > 65000) throw ConfigError("scenario config: base_port out of range");

  if (!j.contains("devices") || !j["devices"].is_array() || j["devices"].empty()) {
    throw ConfigError("scenario config: 'devices' must be a non-empty array");
  }
  for (const auto& d : j["devices"]) {
    ScenarioDevice dev;
    dev.name = Get<std::string>(d, "name", "");
    if (dev.name.empty()) throw ConfigError("scenario config: device without a name");
    for (const auto& existing : c.devices) {
      if (existing.name == dev.name) throw ConfigError("scenario config: duplicate device " + dev.name);
    }
    dev.attributes = Get<std::vector<std::string>>(d, "attributes", {});
    if (dev.attributes.empty()) throw ConfigError("scenario config: device " + dev.name + " has no attributes");
    try {
      dev.mode = nodes::ParseDeliveryMode(Get<std::string>(d, "mode", "pull"));
      (void)policy::MakeAttributeSet(dev.attributes);
    } catch (const ArgumentError& e) {
      throw ConfigError("scenario config: device " + dev.name + ": " + e.what());
    }
    c.devices.push_back(std::move(dev));
  }
  if (!j.contains("messages") || !j["messages"].is_array() || j["messages"].empty()) {
    throw ConfigError("scenario config: 'messages' must be a non-empty array");
  }
  for (const auto& m : j["messages"]) {
    ScenarioMessage msg{Get<std::string>(m, "text", ""), Get<std::string>(m, "policy", "")};
    if (msg.text.empty()) throw ConfigError("scenario config: message without text");
    try {
      (void)policy::ParsePolicy(msg.policy);
    } catch (const ArgumentError& e) {
      throw ConfigError("scenario config: policy '" + msg.policy + "': " + e.what());
    }
    c.messages.push_back(std::move(msg));
  }
  if (j.contains("expect")) {
    c.expect = Get<std::map<std::string, std::vector<std::string>>>(j, "expect", {});
    for (const auto& [name, list] : c.expect) {
      bool known = false;
      for (const auto& d : c.devices) known = known || d.name == name;
      if (!known) throw ConfigError("scenario config: expect names unknown device " + name);
      if (list.size() != c.messages.size()) {
        throw ConfigError("scenario config: expect." + name + " needs one outcome per message");
      }
    }
  }
  return c;
}

nlohmann::json ScenarioConfig::ToJson() const {
  nlohmann::json devs = nlohmann::json::array();
  for (const auto& d : devices) {
    devs.push_back({{"name", d.name}, {"attributes", d.attributes}, {"mode", std::string(nodes::ToString(d.mode))}});
  }
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({{"text", m.text}, {"policy", m.policy}});
  nlohmann::json j{{"profile", std::string(crypto::ToString(profile))},
                   {"seed", seed},
                   {"slot_seconds", slot_seconds},
                   {"freshness_slots", freshness_slots},
                   {"validators", validators},
                   {"quorum", quorum},
                   {"base_port", base_port},
                   {"fault", std::string(ToString(fault))},
                   {"max_latency_slots", max_latency_slots},
                   {"tick_ms", tick_ms},
                   {"devices", devs},
                   {"messages", msgs}};
  if (!expect.empty()) j["expect"] = expect;
  return j;
}

std::string ExpectedOutcome(const policy::AccessTree& tree, const policy::AttributeSet& attrs, ScenarioFault fault) {
  const bool satisfied = policy::Satisfies(tree, attrs).satisfied;
  switch (fault) {
    case ScenarioFault::kCorruptPayload: return "alarm";
    case ScenarioFault::kTamperPayload: return satisfied ? "alarm" : "ignored";
    default: return satisfied ? "accepted" : "ignored";
  }
}

nlohmann::json ScenarioReport::ToJson() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& o : outcomes) {
    list.push_back({{"device", o.device},
                    {"message", o.message},
                    {"expected", o.expected},
                    {"observed", o.observed},
                    {"reason", o.reason},
                    {"latency_seconds", o.latency_seconds}});
  }
  return {{"ok", ok}, {"divergence", divergence}, {"outcomes", list}, {"work_dir", work_dir.string()}};
}

// ---------------------------------------------------------------- processes

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

class Child {
 public:
  Child(std::string name, const std::filesystem::path& exe, const std::vector<std::string>& args,
        const std::filesystem::path& log)
      : name_(std::move(name)) {
    std::vector<std::string> argv_s{exe.string()};
    argv_s.insert(argv_s.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_s) argv.push_back(s.data());
    argv.push_back(nullptr);

    posix_spawn_file_actions_t fa;
    posix_spawn_file_actions_init(&fa);
    posix_spawn_file_actions_addopen(&fa, STDOUT_FILENO, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawn_file_actions_adddup2(&fa, STDOUT_FILENO, STDERR_FILENO);
    const int rc = posix_spawn(&pid_, exe.c_str(), &fa, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&fa);
    if (rc != 0) throw Error("cannot spawn " + exe.string() + " for " + name_);
  }
  Child(const Child&) = delete;
  Child& operator=(const Child&) = delete;
  ~Child() { Terminate(); }

  const std::string& name() const { return name_; }

  // Exit status once finished, or -1 if still running.
  int Poll() {
    if (pid_ <= 0) return status_;
    int st = 0;
    if (waitpid(pid_, &st, WNOHANG) == pid_) {
      pid_ = -1;
      status_ = WIFEXITED(st) ? WEXITSTATUS(st) : 128 + WTERMSIG(st);
      return status_;
    }
    return -1;
  }

  int Wait(double timeout_seconds) {
    const auto start = Clock::now();
    while (Poll() < 0) {
      if (SecondsSince(start) > timeout_seconds) {
        Terminate();
        throw Error(name_ + " did not finish within " + std::to_string(timeout_seconds) + " s");
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    return status_;
  }

  void Terminate() {
    if (pid_ <= 0) return;
    kill(pid_, SIGTERM);
    const auto start = Clock::now();
    while (Poll() < 0 && SecondsSince(start) < 5) std::this_thread::sleep_for(std::chrono::milliseconds(20));
    if (pid_ > 0) {
      kill(pid_, SIGKILL);
      waitpid(pid_, nullptr, 0);
      pid_ = -1;
    }
  }

 private:
  std::string name_;
  pid_t pid_ = -1;
  int status_ = -1;
};

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int FreePort() {
  const int fd = socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw Error("socket() failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  socklen_t len = sizeof(addr);
  if (bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    close(fd);
    throw Error("cannot probe a free port");
  }
  const int port = ntohs(addr.sin_port);
  close(fd);
  return port;
}

int WaitForPort(Child& child, const std::filesystem::path& port_file, double timeout) {
  const auto start = Clock::now();
  for (;;) {
    if (std::filesystem::exists(port_file)) {
      const std::string text = ReadFile(port_file);
      if (!text.empty() && text.back() == '\n') return std::stoi(text);
    }
    if (child.Poll() >= 0) throw Error(child.name() + " exited during startup");
    if (SecondsSince(start) > timeout) throw Error(child.name() + " did not report its port");
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

std::string Url(int port) { return "http://127.0.0.1:" + std::to_string(port); }

std::string Join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- run

ScenarioReport RunScenario(const ScenarioConfig& config, const ScenarioOptions& options) {
  ScenarioReport report;
  if (options.executable.empty()) throw ConfigError("scenario needs the signcast executable");

  std::filesystem::path dir = options.work_dir;
  if (dir.empty()) {
    std::string tmpl = (std::filesystem::temp_directory_path() / "signcast-scenario-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) throw Error("cannot create a scenario directory");
    dir = tmpl;
  } else {
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
  }
  report.work_dir = dir;
  const auto ta_dir = dir / "ta";
  const auto logs = dir / "logs";
  std::filesystem::create_directories(logs);
  {
    std::ofstream(dir / "scenario.json") << config.ToJson().dump(2) << '\n';
  }
  const auto& exe = options.executable;
  const std::string seed = std::to_string(config.seed);
  const std::size_t quorum = config.quorum == 0 ? config.validators : config.quorum;

  auto run = [&](const std::string& name, const std::vector<std::string>& args) {
    Child c(name, exe, args, logs / (name + ".log"));
    const int rc = c.Wait(120);
    if (rc != 0) throw Error(name + " exited with status " + std::to_string(rc) + ", see " + (logs / (name + ".log")).string());
  };

  // TA setup and registrations.
  run("ta-init", {"ta", "init", "--dir", ta_dir.string(), "--profile", std::string(crypto::ToString(config.profile)),
                  "--seed", seed, "--slot-seconds", std::to_string(config.slot_seconds), "--quorum",
                  std::to_string(quorum)});
  std::vector<std::string> sp_creds;
  for (std::size_t i = 0; i < config.validators; ++i) {
    const std::string name = "sp" + std::to_string(i + 1);
    const auto out = ta_dir / (name + ".json");
    run("register-" + name, {"ta", "register", "--dir", ta_dir.string(), "--name", name, "--role", "SP",
                             "--validator", "--out", out.string(), "--seed", seed});
    sp_creds.push_back(out.string());
  }
  run("register-ed", {"ta", "register", "--dir", ta_dir.string(), "--name", "ed1", "--role", "ED", "--out",
                      (ta_dir / "ed1.json").string(), "--seed", seed});
  for (const auto& d : config.devices) {
    run("register-" + d.name, {"ta", "register", "--dir", ta_dir.string(), "--name", d.name, "--role", "SD",
                               "--attributes", Join(d.attributes, ','), "--out", (ta_dir / (d.name + ".json")).string(),
                               "--seed", seed});
  }

  std::vector<std::unique_ptr<Child>> children;
  // Validators need each other's URLs up front, so their ports are fixed
  // before launch.
  std::vector<int> vports;
  for (std::size_t i = 0; i < config.validators; ++i) {
    vports.push_back(config.base_port > 0 ? config.base_port + static_cast<int>(i) : FreePort());
  }
  for (std::size_t i = 0; i < config.validators; ++i) {
    const std::string name = "validator" + std::to_string(i + 1);
    std::vector<std::string> args{"sp",     "run",       "--ta",        ta_dir.string(), "--credentials", sp_creds[i],
                                  "--port", std::to_string(vports[i]), "--port-file", (dir / (name + ".port")).string(),
                                  "--chain", (dir / (name + ".chain.jsonl")).string(), "--tick-ms",
                                  std::to_string(config.tick_ms)};
    for (std::size_t k = 0; k < config.validators; ++k) {
      if (k != i) {
        args.push_back("--peer");
        args.push_back(Url(vports[k]));
      }
    }
    children.push_back(std::make_unique<Child>(name, exe, args, logs / (name + ".log")));
  }
  for (std::size_t i = 0; i < config.validators; ++i) {
    WaitForPort(*children[i], dir / ("validator" + std::to_string(i + 1) + ".port"), options.startup_timeout_seconds);
  }

  const nodes::EdgeFault edge_fault = config.fault == ScenarioFault::kTamperPayload   ? nodes::EdgeFault::kTamperPayload
                                      : config.fault == ScenarioFault::kCorruptPayload ? nodes::EdgeFault::kCorruptPayload
                                                                                        : nodes::EdgeFault::kNone;
  const int ed_port_arg = config.base_port > 0 ? config.base_port + 10 : 0;
  children.push_back(std::make_unique<Child>(
      "ed1", exe,
      std::vector<std::string>{"ed", "run", "--ta", ta_dir.string(), "--validator", Url(vports[0]), "--port",
                               std::to_string(ed_port_arg), "--port-file", (dir / "ed1.port").string(), "--fault",
                               std::string(nodes::ToString(edge_fault)), "--poll-ms", std::to_string(config.tick_ms)},
      logs / "ed1.log"));
  const int ed_port = WaitForPort(*children.back(), dir / "ed1.port", options.startup_timeout_seconds);

  std::vector<std::filesystem::path> event_logs;
  std::vector<int> sd_ports;
  for (std::size_t j = 0; j < config.devices.size(); ++j) {
    const auto& d = config.devices[j];
    const auto events = dir / (d.name + ".events.jsonl");
    event_logs.push_back(events);
    const int port_arg = config.base_port > 0 ? config.base_port + 20 + static_cast<int>(j) : 0;
    children.push_back(std::make_unique<Child>(
        d.name, exe,
        std::vector<std::string>{"sd", "run", "--ta", ta_dir.string(), "--credentials",
                                 (ta_dir / (d.name + ".json")).string(), "--ed", Url(ed_port), "--mode",
                                 std::string(nodes::ToString(d.mode)), "--port", std::to_string(port_arg),
                                 "--port-file", (dir / (d.name + ".port")).string(), "--events", events.string(),
                                 "--freshness-slots", std::to_string(config.freshness_slots)},
        logs / (d.name + ".log")));
    sd_ports.push_back(WaitForPort(*children.back(), dir / (d.name + ".port"), options.startup_timeout_seconds));
  }

  auto diverge = [&](const std::string& what) {
    if (report.divergence.empty()) report.divergence = what;
  };

  auto expected_for = [&](const ScenarioDevice& dev, std::size_t m, const policy::AccessTree& tree) {
    auto it = config.expect.find(dev.name);
    if (it != config.expect.end()) return it->second[m];
    return ExpectedOutcome(tree, policy::MakeAttributeSet(dev.attributes), config.fault);
  };

  const double budget = static_cast<double>((config.max_latency_slots + 2) * config.slot_seconds) + 20.0;
  for (std::size_t m = 0; m < config.messages.size() && report.divergence.empty(); ++m) {
    const auto& msg = config.messages[m];
    const auto tree = policy::ParsePolicy(msg.policy);
    const std::string name = "publish" + std::to_string(m + 1);
    const auto pub_log = logs / (name + ".log");
    const auto pub_out = dir / (name + ".json");
    const auto start = Clock::now();
    {
      Child pub(name, exe,
                {"sp", "publish", "--ta", ta_dir.string(), "--credentials", sp_creds[0], "--validator", Url(vports[0]),
                 "--policy", msg.policy, "--message", msg.text, "--seed", seed, "--label", name, "--out",
                 pub_out.string()},
                pub_log);
      const int rc = pub.Wait(60);
      if (rc != 0) {
        diverge("message " + std::to_string(m + 1) + ": publish exited with status " + std::to_string(rc));
        break;
      }
    }
    const auto response = nodes::SubmitResponse::FromJson(nodes::ReadJsonFile(pub_out));
    if (!response.accepted) {
      diverge("message " + std::to_string(m + 1) + ": validator rejected (" + response.reason + ")");
      break;
    }

    // Events are matched by block index: a misbehaving edge device may
    // rewrite the digest the devices see.
    std::optional<std::uint64_t> block_index;
    nodes::HttpClient validator(Url(vports[0]), nodes::RetryPolicy{2, 50, 200});
    std::vector<bool> done(config.devices.size(), false);
    std::size_t remaining = config.devices.size();
    while (remaining > 0 && SecondsSince(start) < budget) {
      if (!block_index) {
        try {
          const auto listing = validator.GetJson(nodes::HeadersPath(1));
          for (const auto& h : listing.at("headers")) {
            const auto view = nodes::HeaderView::FromJson(h);
            if (view.payload_digest == response.payload_digest) block_index = view.header.index;
          }
        } catch (const std::exception&) {
          // retried on the next pass
        }
      }
      for (std::size_t j = 0; j < config.devices.size() && block_index; ++j) {
        if (done[j]) continue;
        for (const auto& e : nodes::ReadEventLog(event_logs[j])) {
          if (e.index != *block_index || e.event == "duplicate") continue;
          const auto& dev = config.devices[j];
          ScenarioOutcome o;
          o.device = dev.name;
          o.message = std::to_string(m + 1);
          o.expected = expected_for(dev, m, tree);
          o.observed = e.event;
          o.reason = e.reason;
          o.latency_seconds = SecondsSince(start);
          report.outcomes.push_back(o);
          done[j] = true;
          --remaining;
          break;
        }
      }
      if (remaining > 0) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    for (std::size_t j = 0; j < config.devices.size(); ++j) {
      if (done[j]) continue;
      const auto& dev = config.devices[j];
      report.outcomes.push_back({dev.name, std::to_string(m + 1), expected_for(dev, m, tree), "timeout",
                                 block_index ? "no device event" : "record never reached the chain", budget});
    }
  }

  if (config.fault == ScenarioFault::kStaleReplay && report.divergence.empty()) {
    // Re-deliver the first block's header once it has aged out.
    nodes::HttpClient ed(Url(ed_port));
    const auto headers = ed.GetJson(nodes::HeadersPath(1)).at("headers");
    if (headers.empty()) {
      diverge("stale-replay: edge device has no block to replay");
    } else {
      const auto header = nodes::HeaderView::FromJson(headers.front());
      const std::uint64_t window = config.freshness_slots * config.slot_seconds;
      ledger::SystemClock wall;
      while (wall.Now() <= header.header.timestamp + window + 1) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      const nodes::PushMessage replay{header, std::nullopt};
      for (std::size_t j = 0; j < config.devices.size(); ++j) {
        ScenarioOutcome o{config.devices[j].name, "replay", "stale", "", "", 0};
        try {
          const auto r = nodes::HttpClient(Url(sd_ports[j])).PostJson(nodes::path::kPush, replay.ToJson());
          o.observed = r.value("status", "");
          o.reason = r.value("reason", "");
        } catch (const std::exception& e) {
          o.observed = "error";
          o.reason = e.what();
        }
        report.outcomes.push_back(o);
      }
    }
  }

  for (auto& c : children) c->Terminate();

  const double bound = static_cast<double>(config.max_latency_slots * config.slot_seconds);
  for (const auto& o : report.outcomes) {
    if (o.observed != o.expected) {
      diverge(o.device + " message " + o.message + ": expected " + o.expected + ", observed " + o.observed +
              (o.reason.empty() ? "" : " (" + o.reason + ")"));
    } else if (o.message != "replay" && o.latency_seconds > bound) {
      diverge(o.device + " message " + o.message + ": latency " + std::to_string(o.latency_seconds) +
              " s exceeds " + std::to_string(config.max_latency_slots) + " slots");
    }
  }
  report.ok = report.divergence.empty();
  std::ofstream(dir / "report.json") << report.ToJson().dump(2) << '\n';
  return report;
}

}  // namespace signcast::harness
