// signcast: role runner, benchmark and scenario driver.

#include <signal.h>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "signcast/errors.hpp"
#include "signcast/harness/bench.hpp"
#include "signcast/harness/scenario.hpp"
#include "signcast/nodes/edge_device.hpp"
#include "signcast/nodes/service_provider.hpp"
#include "signcast/nodes/smart_device.hpp"
#include "signcast/nodes/trusted_authority.hpp"
#include "signcast/nodes/validator.hpp"
#include "signcast/policy/parser.hpp"

namespace fs = std::filesystem;
using namespace signcast;

namespace {

constexpr int kExitRejected = 3;

std::unique_ptr<Rng> MakeRng(const std::optional<std::uint64_t>& seed, const std::string& label) {
  if (!seed) return std::make_unique<OsRng>();
  return std::make_unique<SeededRng>(SeededRng(*seed).Derive(label));
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void WritePortFile(const std::string& file, int port) {
  if (file.empty()) return;
  const fs::path tmp = file + ".tmp";
  std::ofstream(tmp) << port << '\n';
  fs::rename(tmp, file);
}

// Blocks SIGINT/SIGTERM in every thread; WaitForShutdown() then collects
// them synchronously.
void BlockShutdownSignals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
}

void WaitForShutdown() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  int sig = 0;
  sigwait(&set, &sig);
}

std::string ReadText(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw NotFoundError("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"signcast: attribute-based signcrypted dissemination over a PoA ledger"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---------------------------------------------------------------- ta
  auto* ta = app.add_subcommand("ta", "Trusted authority");
  ta->require_subcommand(1);

  struct {
    std::string dir, profile = "SS512";
    std::optional<std::uint64_t> seed;
    std::uint64_t slot_seconds = 15;
    std::size_t quorum = 1;
    bool force = false;
  } init;
  auto* ta_init = ta->add_subcommand("init", "Run setup and create a TA directory");
  ta_init->add_option("--dir", init.dir, "TA directory")->required();
  ta_init->add_option("--profile", init.profile, "SS512 or MNT159")->capture_default_str();
  ta_init->add_option("--seed", init.seed, "Deterministic randomness");
  ta_init->add_option("--slot-seconds", init.slot_seconds, "PoA slot length")->capture_default_str();
  ta_init->add_option("--quorum", init.quorum, "Approvals per block")->capture_default_str();
  ta_init->add_flag("--force", init.force, "Overwrite an existing TA directory");
  ta_init->callback([&] {
    if (!init.force && fs::exists(fs::path(init.dir) / "ta_state.json")) {
      throw ConfigError(init.dir + " already holds a TA; pass --force to replace it");
    }
    auto rng = MakeRng(init.seed, "ta/setup");
    auto authority = nodes::TrustedAuthority::Init(crypto::ParseCurveProfile(init.profile), *rng,
                                                   {init.slot_seconds, init.quorum});
    authority.Save(init.dir);
    std::cout << "initialised " << crypto::ToString(authority.pk().profile) << " TA in " << init.dir << '\n';
  });

  struct {
    std::string dir, name, role, attributes, out;
    bool validator = false;
    std::optional<std::uint64_t> seed;
  } reg;
  auto* ta_register = ta->add_subcommand("register", "Register an entity and issue its credentials");
  ta_register->add_option("--dir", reg.dir, "TA directory")->required();
  ta_register->add_option("--name", reg.name, "Real identity (kept by the TA only)")->required();
  ta_register->add_option("--role", reg.role, "SP, ED or SD")->required();
  ta_register->add_option("--attributes", reg.attributes, "Comma-separated attributes (SD)");
  ta_register->add_flag("--validator", reg.validator, "SP joins the validator set");
  ta_register->add_option("--out", reg.out, "Credentials file")->required();
  ta_register->add_option("--seed", reg.seed, "Deterministic randomness");
  ta_register->callback([&] {
    auto authority = nodes::TrustedAuthority::Load(reg.dir);
    auto rng = MakeRng(reg.seed, "ta/register/" + reg.name);
    const auto creds = authority.Register(reg.name, nodes::ParseRole(reg.role),
                                          policy::MakeAttributeSet(SplitList(reg.attributes)), *rng, reg.validator);
    creds.Save(reg.out);
    authority.Save(reg.dir);
    std::cout << creds.pseudo_id.ToHex() << '\n';
  });

  struct {
    std::string dir, pseudo;
  } trace;
  auto* ta_trace = ta->add_subcommand("trace", "Map a pseudo identity back to its real identity");
  ta_trace->add_option("--dir", trace.dir, "TA directory")->required();
  ta_trace->add_option("--pseudo", trace.pseudo, "32 hex chars")->required();
  ta_trace->callback([&] {
    const auto authority = nodes::TrustedAuthority::Load(trace.dir);
    std::cout << authority.Trace(ledger::PseudoId::FromHex(trace.pseudo)) << '\n';
  });

  // ---------------------------------------------------------------- sp
  auto* sp = app.add_subcommand("sp", "Service provider");
  sp->require_subcommand(1);

  struct {
    std::string ta, credentials, host = "127.0.0.1", port_file, chain;
    int port = 0, tick_ms = 200;
    std::vector<std::string> peers;
  } sprun;
  auto* sp_run = sp->add_subcommand("run", "Run a validator node with this SP's credentials");
  sp_run->add_option("--ta", sprun.ta, "TA directory (public files)")->required();
  sp_run->add_option("--credentials", sprun.credentials, "SP credentials file")->required();
  sp_run->add_option("--host", sprun.host)->capture_default_str();
  sp_run->add_option("--port", sprun.port, "0 picks a free port")->capture_default_str();
  sp_run->add_option("--port-file", sprun.port_file, "Write the bound port here");
  sp_run->add_option("--chain", sprun.chain, "JSONL chain file");
  sp_run->add_option("--peer", sprun.peers, "Other validator base URL (repeatable)");
  sp_run->add_option("--tick-ms", sprun.tick_ms, "Slot loop period")->capture_default_str();
  sp_run->callback([&] {
    nodes::ValidatorOptions opts;
    opts.host = sprun.host;
    opts.port = sprun.port;
    opts.chain_file = sprun.chain;
    opts.peers = sprun.peers;
    opts.tick_ms = sprun.tick_ms;
    nodes::ValidatorNode node(nodes::EntityCredentials::Load(sprun.credentials), nodes::LoadValidators(sprun.ta),
                              nodes::LoadRegistry(sprun.ta), opts);
    WritePortFile(sprun.port_file, node.Start());
    WaitForShutdown();
    node.Stop();
  });

  struct {
    std::string ta, credentials, validator, policy, message, message_file, out, label = "publish";
    std::optional<std::uint64_t> seed;
  } pub;
  auto* sp_publish = sp->add_subcommand("publish", "Signcrypt a message and submit it");
  sp_publish->add_option("--ta", pub.ta, "TA directory (unused unless credentials lack params)");
  sp_publish->add_option("--credentials", pub.credentials, "SP credentials file")->required();
  sp_publish->add_option("--validator", pub.validator, "Validator base URL")->required();
  sp_publish->add_option("--policy", pub.policy, "Access policy, e.g. \"(a and b) or c\"")->required();
  auto* msg_opt = sp_publish->add_option("--message", pub.message, "Message text");
  sp_publish->add_option("--message-file", pub.message_file, "Message bytes from a file")->excludes(msg_opt);
  sp_publish->add_option("--out", pub.out, "Also write the validator response here");
  sp_publish->add_option("--seed", pub.seed, "Deterministic randomness");
  sp_publish->add_option("--label", pub.label, "Seed derivation label")->capture_default_str();
  sp_publish->callback([&] {
    const nodes::ServiceProvider provider(nodes::EntityCredentials::Load(pub.credentials));
    const std::string body = pub.message_file.empty() ? pub.message : ReadText(pub.message_file);
    auto rng = MakeRng(pub.seed, "sp/" + pub.label);
    const auto record = provider.MakeRecord(AsBytes(body), pub.policy, *rng);
    const auto response = provider.Publish(record, nodes::HttpClient(pub.validator));
    const auto j = response.ToJson();
    if (!pub.out.empty()) nodes::WriteJsonFile(pub.out, j);
    std::cout << j.dump() << '\n';
    if (!response.accepted) exit_code = kExitRejected;
  });

  // ---------------------------------------------------------------- ed
  auto* ed = app.add_subcommand("ed", "Edge device");
  ed->require_subcommand(1);
  struct {
    std::string ta, validator, host = "127.0.0.1", port_file, fault = "none", anchor;
    int port = 0, poll_ms = 200;
    std::vector<std::string> devices;
  } edrun;
  auto* ed_run = ed->add_subcommand("run", "Follow a validator and serve devices");
  ed_run->add_option("--ta", edrun.ta, "TA directory (public files)")->required();
  ed_run->add_option("--validator", edrun.validator, "Validator base URL")->required();
  ed_run->add_option("--host", edrun.host)->capture_default_str();
  ed_run->add_option("--port", edrun.port, "0 picks a free port")->capture_default_str();
  ed_run->add_option("--port-file", edrun.port_file, "Write the bound port here");
  ed_run->add_option("--device", edrun.devices, "Device URL, optionally suffixed ,push (repeatable)");
  ed_run->add_option("--poll-ms", edrun.poll_ms, "Sync period")->capture_default_str();
  ed_run->add_option("--fault", edrun.fault, "none, tamper-payload or corrupt-payload")->capture_default_str();
  ed_run->add_option("--anchor", edrun.anchor, "Genesis anchor hash (hex) after a checkpoint");
  ed_run->callback([&] {
    nodes::EdgeOptions opts;
    opts.host = edrun.host;
    opts.port = edrun.port;
    opts.validator_url = edrun.validator;
    opts.poll_ms = edrun.poll_ms;
    opts.fault = nodes::ParseEdgeFault(edrun.fault);
    if (!edrun.anchor.empty()) opts.anchor = Digest256::FromHex(edrun.anchor);
    for (const auto& d : edrun.devices) {
      const auto parts = SplitList(d);
      opts.devices.push_back(
          {parts.at(0), parts.size() > 1 ? nodes::ParseDeliveryMode(parts[1]) : nodes::DeliveryMode::kPull});
    }
    nodes::EdgeNode node(nodes::LoadValidators(edrun.ta), nodes::LoadRegistry(edrun.ta), opts);
    WritePortFile(edrun.port_file, node.Start());
    WaitForShutdown();
    node.Stop();
  });

  // ---------------------------------------------------------------- sd
  auto* sd = app.add_subcommand("sd", "Smart device");
  sd->require_subcommand(1);
  struct {
    std::string ta, credentials, ed_url, host = "127.0.0.1", port_file, mode = "pull", events;
    int port = 0;
    std::uint64_t freshness_slots = nodes::kDefaultFreshnessSlots;
    bool no_subscribe = false;
  } sdrun;
  auto* sd_run = sd->add_subcommand("run", "Receive and designcrypt pushed records");
  sd_run->add_option("--ta", sdrun.ta, "TA directory (public files)")->required();
  sd_run->add_option("--credentials", sdrun.credentials, "SD credentials file")->required();
  sd_run->add_option("--ed", sdrun.ed_url, "Edge device base URL");
  sd_run->add_option("--host", sdrun.host)->capture_default_str();
  sd_run->add_option("--port", sdrun.port, "0 picks a free port")->capture_default_str();
  sd_run->add_option("--port-file", sdrun.port_file, "Write the bound port here");
  sd_run->add_option("--mode", sdrun.mode, "pull or push")->capture_default_str();
  sd_run->add_option("--events", sdrun.events, "JSONL event log");
  sd_run->add_option("--freshness-slots", sdrun.freshness_slots, "Maximum header age in slots")->capture_default_str();
  sd_run->add_flag("--no-subscribe", sdrun.no_subscribe, "Do not register with the edge device");
  sd_run->callback([&] {
    nodes::DeviceOptions opts;
    opts.host = sdrun.host;
    opts.port = sdrun.port;
    opts.edge_url = sdrun.ed_url;
    opts.subscribe = !sdrun.no_subscribe;
    opts.mode = nodes::ParseDeliveryMode(sdrun.mode);
    opts.event_log = sdrun.events;
    opts.freshness_slots = sdrun.freshness_slots;
    nodes::SmartDevice device(nodes::EntityCredentials::Load(sdrun.credentials), nodes::LoadRegistry(sdrun.ta),
                              nodes::LoadValidators(sdrun.ta), opts);
    WritePortFile(sdrun.port_file, device.Start());
    WaitForShutdown();
    device.Stop();
  });

  // ---------------------------------------------------------------- bench
  struct {
    std::vector<std::string> profiles{"SS512", "MNT159"}, ops;
    std::size_t min = 2, max = 19, trials = 5;
    double min_series_seconds = 0;
    std::uint64_t seed = 1;
    std::string out;
  } bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time the scheme over AND policies of n attributes; CSV output");
  bench_cmd->add_option("--profile", bench.profiles, "Curve profiles")->capture_default_str();
  bench_cmd->add_option("--op", bench.ops, "setup, keygen, signcrypt, designcrypt (default all)");
  bench_cmd->add_option("--min-attributes", bench.min)->capture_default_str();
  bench_cmd->add_option("--max-attributes", bench.max)->capture_default_str();
  bench_cmd->add_option("--trials", bench.trials, "Timed trials per point, at least 5")->capture_default_str();
  bench_cmd->add_option("--min-series-seconds", bench.min_series_seconds,
                        "Raise trials so each operation/profile series runs about this long")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "CSV file (default stdout)");
  bench_cmd->callback([&] {
    harness::BenchConfig cfg;
    cfg.profiles.clear();
    for (const auto& p : bench.profiles) cfg.profiles.push_back(crypto::ParseCurveProfile(p));
    if (!bench.ops.empty()) {
      cfg.ops.clear();
      for (const auto& o : bench.ops) cfg.ops.push_back(harness::ParseBenchOp(o));
    }
    cfg.min_attributes = bench.min;
    cfg.max_attributes = bench.max;
    cfg.trials = bench.trials;
    cfg.min_series_seconds = bench.min_series_seconds;
    cfg.seed = bench.seed;
    const auto rows = harness::RunBench(cfg);
    if (bench.out.empty()) {
      harness::WriteBenchCsv(std::cout, rows);
    } else {
      std::ofstream out(bench.out);
      harness::WriteBenchCsv(out, rows);
    }
  });

  // ---------------------------------------------------------------- scenario
  struct {
    std::string config, work_dir;
  } scen;
  auto* scenario = app.add_subcommand("scenario", "Run a multi-process local deployment");
  scenario->add_option("--config", scen.config, "Scenario JSON")->required();
  scenario->add_option("--work-dir", scen.work_dir, "Directory for state and logs (recreated)");
  scenario->callback([&] {
    const auto cfg = harness::ScenarioConfig::FromJson(nodes::ReadJsonFile(scen.config));
    harness::ScenarioOptions opts;
    opts.executable = fs::read_symlink("/proc/self/exe");
    opts.work_dir = scen.work_dir;
    const auto report = harness::RunScenario(cfg, opts);
    std::cout << report.ToJson().dump(2) << '\n';
    if (!report.ok) {
      std::cerr << "scenario failed: " << report.divergence << '\n';
      exit_code = 1;
    }
  });

  BlockShutdownSignals();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const policy::PolicyParseError& e) {
    std::cerr << "error: policy: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
