#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "rpm3/sim.hpp"

namespace rpm3 {

inline constexpr int kSchemaVersion = 1;

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRegime = 3;

/// One experiment. A is r x s, B is s x l; A is split into m row blocks and B into k column blocks.
struct ExperimentConfig {
  std::string scheme = "rpm3";  ///< rpm3, kes, lb-ideal, lb-gasp, lb-gasp-{z1,low,medium,large}
  std::string preset;
  std::size_t m = 20, k = 30;
  std::size_t r = 20, s = 1, l = 30;
  std::uint64_t q = 2147483647ULL;
  ServiceModel model = ServiceModel::Model1;
  std::vector<ClusterRates> clusters;
  double t_m = 1.0;
  std::optional<std::size_t> n_s;  ///< KES stragglers; default: size of the last cluster
  std::vector<std::size_t> z_values{1};
  std::optional<double> delta;  ///< set: cluster by round-1 completion windows
  double epsilon = 0.05;        ///< Fountain overhead for analysis and latency-only runs
  bool simulated_gammas = false;
  bool latency_only = false;
  std::size_t replications = 1;
  std::uint64_t seed = 1;
  std::string output;
  bool strict = false;
  std::uint64_t audit_q = 5;
  std::size_t audit_n = 4;
  bool negative_control = false;

  std::size_t n() const;
  std::size_t stragglers() const;
  /// Checks ranges and scheme/model compatibility; throws ConfigError naming the field.
  void validate() const;
  nlohmann::json to_json() const;
};

std::vector<std::string> preset_names();
/// Bundled parameters: setting{1,2}-{homogeneous,heterogeneous}, scaled to n=100 unless full.
ExperimentConfig preset_config(const std::string& name, bool full = false);

/// Reads a config document; a "preset" key loads those values first. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// FNV-1a of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);
/// Build version string, from git describe at configure time.
const char* build_version();

/**
 * CSV, one row per (z, replication). Returns an exit code. With `trace`, rpm3 runs also write one
 * row per completion event: z, seed, event_index, sim_time, worker, cluster, round, packets_decoded_total.
 */
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream* trace = nullptr);
/// CSV of closed-form quantities per z, with a status column. Returns kExitRegime in strict mode on violations.
int cmd_analyze(const ExperimentConfig& cfg, std::ostream& out);
/// JSON audit report for every z in z_values. Returns kExitOk even when the audit fails.
int cmd_audit(const ExperimentConfig& cfg, std::ostream& out);
nlohmann::json audit_json(const ExperimentConfig& cfg);

}  // namespace rpm3
