// Command-line front end: simulate | analyze | audit.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <utility>

#include "rpm3/cli.hpp"
#include "rpm3/error.hpp"

namespace {

struct Options {
  std::string config, out, preset, trace;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  bool full = false;
  bool strict = false;
};

rpm3::ExperimentConfig load(const Options& o) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) rpm3::fail(rpm3::Errc::ConfigError, "config: cannot open " + o.config);
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      rpm3::fail(rpm3::Errc::ConfigError, std::string("config: ") + e.what());
    }
  } else if (o.preset.empty()) {
    rpm3::fail(rpm3::Errc::ConfigError, "config: give --config or --preset");
  }
  if (!o.preset.empty()) j["preset"] = o.preset;
  if (o.full) j["full_scale"] = true;
  if (o.seed) j["seed"] = *o.seed;
  if (o.reps) j["replications"] = *o.reps;
  if (o.strict) j["strict"] = true;
  return rpm3::config_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rateless private distributed matrix multiplication: simulation, analysis, privacy audit"};
  app.require_subcommand(1);
  Options o;
  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "run the chosen scheme; one CSV row per (z, replication)"},
      {"analyze", "closed-form rates and latency bounds per z"},
      {"audit", "exhaustive privacy audit on a tiny field (JSON)"},
  };
  for (const auto& [name, about] : commands) {
    CLI::App* sub = app.add_subcommand(name, about);
    sub->add_option("--config", o.config, "JSON experiment config");
    sub->add_option("--out", o.out, "output path (default: config 'output' or stdout)");
    sub->add_option("--seed", o.seed, "base seed; replication r uses seed + r");
    sub->add_option("--reps", o.reps, "replications");
    sub->add_option("--preset", o.preset, "bundled parameter set");
    sub->add_flag("--full", o.full, "paper-scale preset (n = 1000)");
    sub->add_flag("--strict", o.strict, "exit 3 when a row has a non-ok status");
    if (std::string(name) == "simulate") sub->add_option("--trace", o.trace, "per-event trace CSV of rpm3 runs");
  }
  app.add_subcommand("presets", "list bundled presets");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : rpm3::kExitConfig;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  if (cmd == "presets") {
    for (const std::string& p : rpm3::preset_names()) std::cout << p << '\n';
    return 0;
  }

  try {
    rpm3::ExperimentConfig cfg = load(o);
    const std::string path = o.out.empty() ? cfg.output : o.out;
    std::ostringstream buf;
    int rc = 0;
    std::ofstream trace;
    if (!o.trace.empty()) {
      trace.open(o.trace);
      if (!trace) rpm3::fail(rpm3::Errc::ConfigError, "trace: cannot write " + o.trace);
    }
    if (cmd == "simulate") rc = rpm3::cmd_simulate(cfg, buf, o.trace.empty() ? nullptr : &trace);
    else if (cmd == "analyze") rc = rpm3::cmd_analyze(cfg, buf);
    else rc = rpm3::cmd_audit(cfg, buf);
    if (path.empty() || path == "-") {
      std::cout << buf.str();
    } else {
      std::ofstream f(path);
      if (!f) rpm3::fail(rpm3::Errc::ConfigError, "output: cannot write " + path);
      f << buf.str();
    }
    return rc;
  } catch (const rpm3::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == rpm3::Errc::ConfigError ? rpm3::kExitConfig : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
