#include "rpm3/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "rpm3/analysis.hpp"
#include "rpm3/baselines.hpp"
#include "rpm3/error.hpp"
#include "rpm3/privacy_audit.hpp"
#include "rpm3/protocol.hpp"

#ifndef RPM3_VERSION
#define RPM3_VERSION "unknown"
#endif

namespace rpm3 {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& msg) {
  fail(Errc::ConfigError, path + ": " + msg);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt(const Rational& r) { return fmt(to_double(r)); }

struct PresetData {
  std::vector<std::size_t> sizes;
  std::vector<double> gammas;
};

const std::map<std::string, PresetData>& preset_table() {
  static const std::map<std::string, PresetData> table = {
      {"setting1-homogeneous", {{22, 24, 16, 15, 23}, {12, 9, 6, 3, 1}}},
      {"setting1-heterogeneous", {{22, 24, 16, 15, 23}, {100, 60, 10, 3, 1}}},
      {"setting2-homogeneous", {{22, 30, 19, 16, 13}, {12, 9, 6, 3, 1}}},
      {"setting2-heterogeneous", {{22, 30, 19, 16, 13}, {100, 60, 10, 3, 1}}},
  };
  return table;
}

std::optional<LbKind> lb_kind_of(const std::string& scheme) {
  for (LbKind k : {LbKind::Ideal, LbKind::GaspZ1, LbKind::GaspLow, LbKind::GaspMedium, LbKind::GaspLarge,
                   LbKind::GaspBest})
    if (scheme == lb_kind_name(k)) return k;
  return std::nullopt;
}

template <class T>
T read(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    config_error(path, "wrong type");
  }
}

std::size_t read_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) config_error(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::vector<std::size_t> read_z(const json& j) {
  std::vector<std::size_t> out;
  if (j.is_number_integer()) {
    out.push_back(read_count(j, "z"));
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_count(j[i], "z[" + std::to_string(i) + "]"));
  } else if (j.is_object()) {
    if (!j.contains("from") || !j.contains("to")) config_error("z", "range needs from and to");
    const std::size_t a = read_count(j["from"], "z.from"), b = read_count(j["to"], "z.to");
    if (a > b) config_error("z", "empty range");
    for (std::size_t z = a; z <= b; ++z) out.push_back(z);
  } else {
    config_error("z", "expected an integer, a list or {from, to}");
  }
  return out;
}

void write_provenance(std::ostream& out, const ExperimentConfig& cfg, const char* command) {
  out << "# rpm3 " << command << "\n";
  out << "# version: " << build_version() << "\n";
  out << "# config_hash: " << config_hash(cfg) << "\n";
  out << "# seed: " << cfg.seed << "\n";
  out << "# times: abstract units; a task costs shift/(mk) + Exp(lambda*mk)\n";
}

std::vector<std::size_t> class_sizes(const ExperimentConfig& cfg) {
  std::vector<std::size_t> s;
  for (const ClusterRates& c : cfg.clusters) s.push_back(c.size);
  return s;
}

std::vector<std::size_t> payloads(const std::vector<std::size_t>& sizes, std::size_t z) {
  std::vector<std::size_t> d;
  for (std::size_t u = 0; u < sizes.size(); ++u)
    d.push_back(u == 0 ? first_cluster_payload(sizes[0], z) : later_cluster_payload(sizes[u], z));
  return d;
}

RunConfig run_config(const ExperimentConfig& cfg, std::size_t z, std::uint64_t seed) {
  RunConfig rc;
  rc.q = cfg.q;
  rc.m = cfg.m;
  rc.k = cfg.k;
  rc.z = z;
  rc.block_rows = cfg.r / cfg.m;
  rc.inner = cfg.s;
  rc.block_cols = cfg.l / cfg.k;
  rc.model = cfg.model;
  rc.classes = cfg.clusters;
  rc.window_clustering = cfg.delta.has_value();
  rc.delta = cfg.delta.value_or(0.0);
  rc.seed = seed;
  rc.symbolic = cfg.latency_only;
  if (rc.symbolic)
    rc.packet_target = ceil_rational(Rational(cfg.m * cfg.k) * (1 + from_double(cfg.epsilon))).convert_to<std::size_t>();
  return rc;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const std::string& x : v) s += (s.empty() ? "" : ";") + x;
  return s.empty() ? "ok" : s;
}

}  // namespace

std::size_t ExperimentConfig::n() const {
  std::size_t n = 0;
  for (const ClusterRates& c : clusters) n += c.size;
  return n;
}

std::size_t ExperimentConfig::stragglers() const {
  if (n_s) return *n_s;
  return clusters.empty() ? 0 : clusters.back().size;
}

void ExperimentConfig::validate() const {
  static const std::set<std::string> schemes = {"rpm3",        "kes",        "lb-ideal",       "lb-gasp",
                                                "lb-gasp-z1",  "lb-gasp-low", "lb-gasp-medium", "lb-gasp-large"};
  if (!schemes.count(scheme)) config_error("scheme", "unknown scheme '" + scheme + "'");
  if (lb_kind_of(scheme) && model != ServiceModel::Model1)
    config_error("model", "load balancing is only defined under model 1");
  if (m < 1 || k < 1) config_error("m", "m and k must be positive");
  if (r % m) config_error("dims.r", "r must be a multiple of m");
  if (l % k) config_error("dims.l", "l must be a multiple of k");
  if (s < 1) config_error("dims.s", "s must be positive");
  if (!is_prime(q) || q >= (1ULL << 32)) config_error("q", "q must be a prime below 2^32");
  if (clusters.empty()) config_error("clusters", "at least one cluster is required");
  for (std::size_t u = 0; u < clusters.size(); ++u) {
    const std::string p = "clusters[" + std::to_string(u) + "]";
    if (clusters[u].size < 1) config_error(p + ".size", "must be positive");
    if (!(clusters[u].lambda > 0)) config_error(p + ".lambda", "must be positive");
    if (clusters[u].shift < 0) config_error(p + ".shift", "must be non-negative");
    if (u > 0 && clusters[u].lambda > clusters[u - 1].lambda)
      config_error(p + ".lambda", "clusters must be ordered fastest first");
  }
  if (z_values.empty()) config_error("z", "no z values");
  for (std::size_t z : z_values)
    if (z < 1) config_error("z", "z must be at least 1");
  if (stragglers() >= n()) config_error("n_s", "must be below n");
  if (delta && *delta < 0) config_error("delta", "must be non-negative");
  if (!(epsilon >= 0)) config_error("epsilon", "must be non-negative");
  if (replications < 1) config_error("replications", "must be positive");
  if (!is_prime(audit_q) || audit_q > 13) config_error("audit.q", "must be a prime up to 13");
  if (audit_n < 1 || audit_n > 6) config_error("audit.n", "must be between 1 and 6");
}

json ExperimentConfig::to_json() const {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["scheme"] = scheme;
  j["preset"] = preset;
  j["m"] = m;
  j["k"] = k;
  j["dims"] = {{"r", r}, {"s", s}, {"l", l}};
  j["q"] = q;
  j["model"] = static_cast<int>(model);
  j["clusters"] = json::array();
  for (const ClusterRates& c : clusters) j["clusters"].push_back({{"size", c.size}, {"lambda", c.lambda}, {"shift", c.shift}});
  j["t_m"] = t_m;
  if (n_s) j["n_s"] = *n_s;
  j["z"] = z_values;
  if (delta) j["delta"] = *delta;
  j["epsilon"] = epsilon;
  j["gammas"] = simulated_gammas ? "simulated" : "lambda";
  j["latency_only"] = latency_only;
  j["replications"] = replications;
  j["seed"] = seed;
  j["strict"] = strict;
  j["audit"] = {{"q", audit_q}, {"n", audit_n}, {"negative_control", negative_control}};
  return j;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : preset_table()) names.push_back(name);
  names.push_back("audit-tiny");
  names.push_back("audit-negative");
  return names;
}

ExperimentConfig preset_config(const std::string& name, bool full) {
  ExperimentConfig cfg;
  cfg.preset = name;
  if (name == "audit-tiny" || name == "audit-negative") {
    cfg.scheme = "rpm3";
    cfg.clusters = {ClusterRates{4, 1.0, 1.0}};
    cfg.n_s = 0;
    cfg.z_values = {1, 2};
    cfg.negative_control = name == "audit-negative";
    return cfg;
  }
  const auto it = preset_table().find(name);
  if (it == preset_table().end()) config_error("preset", "unknown preset '" + name + "'");
  const std::size_t scale = full ? 10 : 1;
  for (std::size_t u = 0; u < it->second.sizes.size(); ++u)
    cfg.clusters.push_back(ClusterRates{it->second.sizes[u] * scale, it->second.gammas[u], 0.0});
  apply_shift_convention(cfg.clusters, cfg.t_m);
  if (full) {
    cfg.m = cfg.r = 2000;
    cfg.k = cfg.l = 3000;
    cfg.latency_only = true;
  }
  return cfg;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) config_error("$", "config must be a JSON object");
  static const std::set<std::string> known = {
      "schema_version", "scheme", "preset", "full_scale", "m", "k", "dims", "q", "model", "clusters", "t_m",
      "n_s", "z", "delta", "epsilon", "gammas", "latency_only", "replications", "seed", "output", "strict", "audit"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) config_error(key, "unknown field");
  if (j.contains("schema_version") && read<int>(j["schema_version"], "schema_version") != kSchemaVersion)
    config_error("schema_version", "expected " + std::to_string(kSchemaVersion));

  const bool full = j.contains("full_scale") && read<bool>(j["full_scale"], "full_scale");
  ExperimentConfig cfg;
  if (j.contains("preset")) cfg = preset_config(read<std::string>(j["preset"], "preset"), full);
  if (j.contains("scheme")) cfg.scheme = read<std::string>(j["scheme"], "scheme");
  if (j.contains("m")) cfg.m = read_count(j["m"], "m");
  if (j.contains("k")) cfg.k = read_count(j["k"], "k");
  if (j.contains("m") && !(j.contains("dims") && j["dims"].contains("r"))) cfg.r = cfg.m;
  if (j.contains("k") && !(j.contains("dims") && j["dims"].contains("l"))) cfg.l = cfg.k;
  if (j.contains("dims")) {
    const json& d = j["dims"];
    if (!d.is_object()) config_error("dims", "expected an object");
    for (const auto& [key, _] : d.items())
      if (key != "r" && key != "s" && key != "l") config_error("dims." + key, "unknown field");
    if (d.contains("r")) cfg.r = read_count(d["r"], "dims.r");
    if (d.contains("s")) cfg.s = read_count(d["s"], "dims.s");
    if (d.contains("l")) cfg.l = read_count(d["l"], "dims.l");
  }
  if (j.contains("q")) cfg.q = read<std::uint64_t>(j["q"], "q");
  if (j.contains("model")) {
    const int mo = read<int>(j["model"], "model");
    if (mo != 1 && mo != 2) config_error("model", "must be 1 or 2");
    cfg.model = mo == 1 ? ServiceModel::Model1 : ServiceModel::Model2;
  }
  if (j.contains("t_m")) cfg.t_m = read<double>(j["t_m"], "t_m");
  if (j.contains("clusters")) {
    const json& cs = j["clusters"];
    if (!cs.is_array()) config_error("clusters", "expected a list");
    cfg.clusters.clear();
    for (std::size_t u = 0; u < cs.size(); ++u) {
      const std::string p = "clusters[" + std::to_string(u) + "]";
      if (!cs[u].is_object() || !cs[u].contains("size") || !cs[u].contains("lambda"))
        config_error(p, "needs size and lambda");
      ClusterRates c;
      c.size = read_count(cs[u]["size"], p + ".size");
      c.lambda = read<double>(cs[u]["lambda"], p + ".lambda");
      if (!(c.lambda > 0)) config_error(p + ".lambda", "must be positive");
      c.shift = cs[u].contains("shift") ? read<double>(cs[u]["shift"], p + ".shift") : cfg.t_m / c.lambda;
      cfg.clusters.push_back(c);
    }
  } else if (j.contains("t_m")) {
    apply_shift_convention(cfg.clusters, cfg.t_m);
  }
  if (j.contains("n_s")) cfg.n_s = read_count(j["n_s"], "n_s");
  if (j.contains("z")) cfg.z_values = read_z(j["z"]);
  if (j.contains("delta")) cfg.delta = read<double>(j["delta"], "delta");
  if (j.contains("epsilon")) cfg.epsilon = read<double>(j["epsilon"], "epsilon");
  if (j.contains("gammas")) {
    const std::string g = read<std::string>(j["gammas"], "gammas");
    if (g != "lambda" && g != "simulated") config_error("gammas", "must be 'lambda' or 'simulated'");
    cfg.simulated_gammas = g == "simulated";
  }
  if (j.contains("latency_only")) cfg.latency_only = read<bool>(j["latency_only"], "latency_only");
  if (j.contains("replications")) cfg.replications = read_count(j["replications"], "replications");
  if (j.contains("seed")) cfg.seed = read<std::uint64_t>(j["seed"], "seed");
  if (j.contains("output")) cfg.output = read<std::string>(j["output"], "output");
  if (j.contains("strict")) cfg.strict = read<bool>(j["strict"], "strict");
  if (j.contains("audit")) {
    const json& a = j["audit"];
    if (!a.is_object()) config_error("audit", "expected an object");
    if (a.contains("q")) cfg.audit_q = read<std::uint64_t>(a["q"], "audit.q");
    if (a.contains("n")) cfg.audit_n = read_count(a["n"], "audit.n");
    if (a.contains("negative_control")) cfg.negative_control = read<bool>(a["negative_control"], "audit.negative_control");
  }
  cfg.validate();
  return cfg;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = cfg.to_json().dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const char* build_version() { return RPM3_VERSION; }

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream* trace) {
  cfg.validate();
  const std::size_t c = cfg.clusters.size(), mk = cfg.m * cfg.k, n = cfg.n();
  write_provenance(out, cfg, "simulate");
  if (trace) {
    write_provenance(*trace, cfg, "simulate --trace");
    *trace << "z,seed,event_index,sim_time,worker,cluster,round,packets_decoded_total\n";
  }
  out << "scheme,z,seed,makespan,N_responses,epsilon";
  for (std::size_t u = 1; u <= c; ++u) out << ",tau_" << u;
  out << ",empirical_rate,status\n";

  const auto lb = lb_kind_of(cfg.scheme);
  for (std::size_t z : cfg.z_values) {
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
      const std::uint64_t seed = cfg.seed + rep;
      std::vector<std::string> taus(c);
      std::string makespan, responses, eps, rate, status = "ok";
      try {
        if (cfg.scheme == "rpm3") {
          RunConfig rc = run_config(cfg, z, seed);
          rc.record_trace = trace != nullptr;
          const RunResult res = run_coordinator(rc);
          const RunStats& st = res.stats;
          if (trace)
            for (const TraceRow& row : st.trace)
              *trace << z << ',' << seed << ',' << row.event_index << ',' << fmt(row.time) << ',' << row.worker << ','
                     << row.cluster << ',' << row.round << ',' << row.packets_total << '\n';
          makespan = fmt(st.makespan);
          responses = std::to_string(st.responses_used);
          eps = fmt(st.epsilon());
          rate = fmt(st.empirical_rate());
          for (std::size_t u = 0; u < st.tau.size() && u < c; ++u) taus[u] = std::to_string(st.tau[u]);
        } else if (cfg.scheme == "kes") {
          const KesParams p = kes_select(n, cfg.stragglers(), z, cfg.m, cfg.k);
          const KesRun run = simulate_kes(p, cfg.model, cfg.clusters, seed);
          const std::size_t used = (n - p.n_s) * p.task_count();
          makespan = fmt(run.makespan);
          responses = std::to_string(used);
          eps = "0";
          rate = fmt(Rational(mk, used));
          for (std::size_t u = 0; u < c; ++u) taus[u] = std::to_string(p.task_count());
          if (!p.exact) status = "kes-inexact";
        } else {
          const LbRun run = simulate_lb(*lb, cfg.model, cfg.clusters, mk, z, seed);
          std::size_t used = 0;
          for (std::size_t u = 0; u < c; ++u) {
            used += cfg.clusters[u].size * run.tau[u];
            taus[u] = std::to_string(run.tau[u]);
          }
          makespan = fmt(run.makespan);
          responses = std::to_string(used);
          eps = "0";
          rate = fmt(Rational(mk, used));
        }
      } catch (const Error& e) {
        if (e.code() == Errc::ConfigError) throw;
        status = errc_name(e.code());
      }
      out << cfg.scheme << ',' << z << ',' << seed << ',' << makespan << ',' << responses << ',' << eps;
      for (const std::string& t : taus) out << ',' << t;
      out << ',' << rate << ',' << status << '\n';
    }
  }
  return kExitOk;
}

int cmd_analyze(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  const std::size_t n = cfg.n(), mk = cfg.m * cfg.k, n_s = cfg.stragglers();
  const std::vector<std::size_t> sizes = class_sizes(cfg);
  const std::vector<Rational> lam_gammas = lb_gammas(cfg.clusters);
  write_provenance(out, cfg, "analyze");
  out << "scheme,z,seed,status,rho_rpm3,rho_rpm3_trace,rho_kes,kes_m_I,kes_k_I,tau_c_rpm3,bound_m1_rpm3,"
         "bound_m2_rpm3,kes_lower_m1,kes_lower_m2,tau_c_lb_ideal,tau_c_lb_gasp,tau_c_lb_gasp_large,"
         "lb_gap_ideal,lb_gap_gasp_large\n";
  bool violation = false;
  for (std::size_t z : cfg.z_values) {
    std::vector<std::string> flags;
    std::map<std::string, std::string> col;
    auto attempt = [&](const std::string& what, auto&& body) {
      try {
        body();
      } catch (const Error& e) {
        flags.push_back(what + "-" + errc_name(e.code()));
      }
    };

    const std::vector<std::size_t> d = payloads(sizes, z);
    const bool rpm3_ok = std::all_of(d.begin(), d.end(), [](std::size_t x) { return x >= 1; });
    if (!rpm3_ok) flags.push_back("rpm3-infeasible");

    std::vector<Rational> gammas = lam_gammas;
    Rational eps = from_double(cfg.epsilon);
    if (cfg.simulated_gammas) {
      attempt("rpm3-sim", [&] {
        ExperimentConfig sym = cfg;
        sym.latency_only = true;
        const RunResult res = run_coordinator(run_config(sym, z, cfg.seed));
        const RateInputs in = rate_inputs_from_stats(res.stats, cfg.m, cfg.k);
        col["rho_rpm3"] = fmt(rate_rpm3(in));
        col["rho_rpm3_trace"] = fmt(res.stats.empirical_rate());
        if (rate_rpm3(in) != res.stats.empirical_rate()) flags.push_back("rate-accounting-mismatch");
      });
    }
    Rational tau_c = 0;
    if (rpm3_ok) {
      tau_c = rpm3_tau_c(mk, eps, gammas, d);
      col["tau_c_rpm3"] = fmt(tau_c);
      if (!cfg.simulated_gammas) {
        RateInputs in;
        in.m = cfg.m;
        in.k = cfg.k;
        in.z = z;
        in.eps = eps;
        in.tau_c = tau_c;
        in.gammas = gammas;
        col["rho_rpm3"] = fmt(rate_rpm3(in));
      }
      BoundInputs b;
      b.n = n;
      b.mk = mk;
      b.t_m = cfg.t_m;
      for (std::size_t u = 0; u < sizes.size(); ++u) {
        b.lambdas.push_back(cfg.clusters[u].lambda);
        b.shifts.push_back(cfg.clusters[u].shift);
        b.taus.push_back(std::max<std::size_t>(1, ceil_rational(gammas[u] * tau_c).convert_to<std::size_t>()));
      }
      attempt("bound-m1", [&] { col["bound_m1_rpm3"] = fmt(rpm3_mean_bound_m1(b)); });
      attempt("bound-m2", [&] { col["bound_m2_rpm3"] = fmt(static_cast<double>(rpm3_mean_bound_m2(b))); });
      attempt("lb_gap", [&] {
        LbGapInputs ci;
        ci.mk = mk;
        ci.z = z;
        ci.eps = eps;
        ci.gammas = gammas;
        ci.sizes = sizes;
        for (const ClusterRates& c : cfg.clusters) ci.lambdas.push_back(c.lambda);
        const LbGapFactors f = lb_gap_factors(ci);
        col["lb_gap_ideal"] = fmt(f.ideal);
        col["lb_gap_gasp_large"] = fmt(f.large);
      });
    }
    attempt("kes", [&] {
      const KesParams p = kes_select(n, n_s, z, cfg.m, cfg.k);
      if (!p.exact) flags.push_back("kes-inexact");
      col["rho_kes"] = fmt(kes_rate(p));
      col["kes_m_I"] = std::to_string(p.m_I);
      col["kes_k_I"] = std::to_string(p.k_I);
      const ClusterRates& fast = cfg.clusters.front();
      col["kes_lower_m1"] = fmt(kes_mean_lower_m1(n, n_s, cfg.t_m, fast.lambda, p.m_I, p.k_I));
      const double shape = static_cast<double>(p.task_count());
      col["kes_lower_m2"] = fmt(static_cast<double>(kes_mean_lower_m2(
          n, n_s, p.task_count(), fast.lambda * static_cast<double>(mk), shape * fast.shift / static_cast<double>(mk))));
    });
    attempt("lb-ideal", [&] { col["tau_c_lb_ideal"] = fmt(lb_tau_c(LbKind::Ideal, mk, lam_gammas, sizes, z)); });
    attempt("lb-gasp", [&] { col["tau_c_lb_gasp"] = fmt(lb_tau_c(LbKind::GaspBest, mk, lam_gammas, sizes, z)); });
    attempt("lb-gasp-large",
            [&] { col["tau_c_lb_gasp_large"] = fmt(lb_tau_c(LbKind::GaspLarge, mk, lam_gammas, sizes, z)); });

    const std::string status = join(flags);
    if (status != "ok") violation = true;
    out << cfg.scheme << ',' << z << ',' << cfg.seed << ',' << status;
    for (const char* key : {"rho_rpm3", "rho_rpm3_trace", "rho_kes", "kes_m_I", "kes_k_I", "tau_c_rpm3", "bound_m1_rpm3",
                            "bound_m2_rpm3", "kes_lower_m1", "kes_lower_m2", "tau_c_lb_ideal", "tau_c_lb_gasp",
                            "tau_c_lb_gasp_large", "lb_gap_ideal", "lb_gap_gasp_large"})
      out << ',' << col[key];
    out << '\n';
  }
  return cfg.strict && violation ? kExitRegime : kExitOk;
}

json audit_json(const ExperimentConfig& cfg) {
  cfg.validate();
  json j;
  j["provenance"] = {{"version", build_version()}, {"config_hash", config_hash(cfg)}, {"seed", cfg.seed}};
  j["negative_control"] = cfg.negative_control;
  j["reports"] = json::array();
  bool pass = true;
  for (std::size_t z : cfg.z_values) {
    if (z > cfg.audit_n) config_error("z", "z=" + std::to_string(z) + " exceeds audit.n=" + std::to_string(cfg.audit_n));
    TinyInstance inst = TinyInstance::standard(cfg.audit_q, cfg.audit_n, z);
    if (cfg.negative_control) inst = inst.with_leaky_worker();
    const AuditReport rep = audit(inst);
    pass = pass && rep.pass();
    j["reports"].push_back(to_json(rep));
  }
  j["pass"] = pass;
  return j;
}

int cmd_audit(const ExperimentConfig& cfg, std::ostream& out) {
  out << audit_json(cfg).dump(2) << '\n';
  return kExitOk;
}

}  // namespace rpm3
