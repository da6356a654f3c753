#include "rpm3/baselines.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "rpm3/error.hpp"

namespace rpm3 {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

std::size_t KesParams::task_count() const { return ceil_div(m, m_I) * ceil_div(k, k_I); }

void KesParams::validate() const {
  if (m_I < 1 || k_I < 1 || m_I > m || k_I > k) fail(Errc::InvalidArgument, "KES partition out of range");
  if (n_s >= n || workers_needed() > n - n_s) fail(Errc::Infeasible, "KES partition needs too many workers");
}

KesParams kes_select(std::size_t n, std::size_t n_s, std::size_t z, std::size_t m, std::size_t k) {
  if (z < 1 || m < 1 || k < 1) fail(Errc::InvalidArgument, "z, m, k must be positive");
  if (n_s >= n || n - n_s <= z) fail(Errc::Infeasible, "need n - n_s > z");
  const std::size_t budget = n - n_s;
  KesParams best;
  best.n = n;
  best.n_s = n_s;
  best.z = z;
  best.m = m;
  best.k = k;
  bool found = false;
  auto consider = [&](std::size_t mi, std::size_t ki, bool exact) {
    KesParams c = best;
    c.m_I = mi;
    c.k_I = ki;
    c.exact = exact;
    if (!found) {
      best = c;
      found = true;
      return;
    }
    const std::size_t pc = mi * ki, pb = best.m_I * best.k_I;
    if (pc != pb) {
      if (pc > pb) best = c;
      return;
    }
    if (c.task_count() != best.task_count()) {
      if (c.task_count() < best.task_count()) best = c;
      return;
    }
    if (mi < best.m_I) best = c;
  };
  for (int pass = 0; pass < 2 && !found; ++pass) {
    const bool exact = pass == 0;
    for (std::size_t ki = 1; ki <= k; ++ki) {
      const std::size_t span = (budget + 1) / (ki + 1);  // max m_I + z
      if (span <= z) break;
      if (exact && (budget + 1) % (ki + 1) != 0) continue;
      const std::size_t mi = std::min(m, span - z);
      if (exact && mi != span - z) continue;
      consider(mi, ki, exact);
    }
  }
  if (!found)
    fail(Errc::Infeasible, "no KES partition for n-n_s=" + std::to_string(budget) + ", z=" + std::to_string(z));
  return best;
}

std::size_t kes_max_exact_z(std::size_t n, std::size_t n_s, std::size_t m, std::size_t k) {
  std::size_t best = 0;
  for (std::size_t z = 1; n_s < n && z < n - n_s; ++z) {
    try {
      if (kes_select(n, n_s, z, m, k).exact) best = z;
    } catch (const Error&) {
    }
  }
  return best;
}

Rational kes_rate(const KesParams& p) {
  p.validate();
  return Rational(p.m_I * p.k_I, p.workers_needed());
}

double kes_makespan(std::vector<double> totals, std::size_t n_s) {
  if (n_s >= totals.size()) fail(Errc::InvalidArgument, "n_s must be below the worker count");
  const std::size_t d = totals.size() - n_s;
  std::nth_element(totals.begin(), totals.begin() + static_cast<long>(d - 1), totals.end());
  return totals[d - 1];
}

KesRun simulate_kes(const KesParams& p, ServiceModel model, const std::vector<ClusterRates>& classes,
                    std::uint64_t seed) {
  p.validate();
  std::vector<WorkerProfile> profiles = expand_profiles(classes);
  if (profiles.size() != p.n) fail(Errc::InvalidArgument, "class sizes must sum to n");
  ServiceSampler sampler(model, seed, profiles, static_cast<double>(p.m * p.k));
  const std::size_t tasks = p.task_count();
  KesRun run;
  run.totals.resize(p.n);
  for (std::size_t w = 0; w < p.n; ++w) {
    double t = 0;
    for (std::size_t i = 0; i < tasks; ++i) t += sampler.next(w);
    run.totals[w] = t;
  }
  run.makespan = kes_makespan(run.totals, p.n_s);
  return run;
}

const char* lb_kind_name(LbKind kind) {
  switch (kind) {
    case LbKind::Ideal: return "lb-ideal";
    case LbKind::GaspZ1: return "lb-gasp-z1";
    case LbKind::GaspLow: return "lb-gasp-low";
    case LbKind::GaspMedium: return "lb-gasp-medium";
    case LbKind::GaspLarge: return "lb-gasp-large";
    case LbKind::GaspBest: return "lb-gasp";
  }
  return "?";
}

Partition gasp_partition(std::size_t N, std::size_t z, LbKind regime, bool enforce_regime) {
  if (z < 1) fail(Errc::InvalidArgument, "z must be positive");
  if (regime == LbKind::GaspZ1 && z != 1) fail(Errc::RegimeViolation, "z=1 regime with z=" + std::to_string(z));
  Partition best;
  bool any_identity = false;
  for (std::size_t a = 1; a <= N; ++a) {
    // largest b for this a under the identity, 0 if none
    std::size_t bmax = 0;
    switch (regime) {
      case LbKind::GaspZ1:
      case LbKind::GaspLow: {
        const std::size_t extra = regime == LbKind::GaspLow ? z * z + z - 3 : 0;
        if (N >= a + extra) bmax = (N - a - extra) / (a + 1);
        break;
      }
      case LbKind::GaspMedium: {
        const std::size_t span = (N + 1) / (a + 1);
        if (span > z) bmax = span - z;
        break;
      }
      case LbKind::GaspLarge:
        if (N + 1 >= 2 * z) bmax = (N + 1 - 2 * z) / (2 * a);
        break;
      default:
        fail(Errc::InvalidArgument, "not a GASP regime");
    }
    if (bmax == 0) continue;
    any_identity = true;
    std::size_t b = bmax;
    if (enforce_regime) {
      bool ok = false;
      switch (regime) {
        case LbKind::GaspZ1: ok = true; break;
        case LbKind::GaspLow: ok = z >= 2 && a > z && b > z; break;
        case LbKind::GaspMedium:
          // b may shrink to make max(a, b) > z only when a is already the larger side
          ok = std::min(a, b) <= z && std::max(a, b) > z;
          if (!ok && a > z && b > z) {
            b = z;
            ok = true;
          }
          break;
        case LbKind::GaspLarge:
          if (a <= z) {
            b = std::min(b, z);
            ok = true;
          }
          break;
        default: break;
      }
      if (!ok) continue;
    }
    if (a * b > best.product()) best = Partition{a, b};
  }
  if (!any_identity) fail(Errc::Infeasible, "no GASP partition fits N=" + std::to_string(N));
  if (best.product() == 0)
    fail(Errc::RegimeViolation, std::string(lb_kind_name(regime)) + " regime not met for N=" + std::to_string(N) +
                                    ", z=" + std::to_string(z));
  return best;
}

std::size_t lb_useful_count(LbKind kind, std::size_t N, std::size_t z) {
  switch (kind) {
    case LbKind::Ideal:
      if (N <= z) fail(Errc::Infeasible, "ideal scheme needs more than z workers");
      return N - z;
    case LbKind::GaspLarge:
      if (N + 1 < 2 * z + 2) fail(Errc::Infeasible, "need N >= 2z+1");
      return (N + 1 - 2 * z) / 2;
    case LbKind::GaspBest: {
      std::size_t best = 0;
      const LbKind regimes[] = {LbKind::GaspZ1, LbKind::GaspLow, LbKind::GaspMedium, LbKind::GaspLarge};
      for (LbKind r : regimes) {
        try {
          best = std::max(best, gasp_partition(N, z, r).product());
        } catch (const Error&) {
        }
      }
      if (best == 0) fail(Errc::Infeasible, "no GASP regime fits N=" + std::to_string(N));
      return best;
    }
    default:
      return gasp_partition(N, z, kind).product();
  }
}

Rational lb_tau_c(LbKind kind, std::size_t mk, const std::vector<Rational>& gammas,
                  const std::vector<std::size_t>& sizes, std::size_t z) {
  if (gammas.empty() || gammas.size() != sizes.size()) fail(Errc::InvalidArgument, "gammas and sizes differ");
  if (gammas.back() != 1) fail(Errc::InvalidArgument, "gamma_c must be 1");
  for (std::size_t u = 1; u < gammas.size(); ++u)
    if (gammas[u] > gammas[u - 1]) fail(Errc::InvalidArgument, "gammas must be non-increasing");
  Rational denom = 0;
  std::size_t prefix = 0;
  for (std::size_t u = 0; u < sizes.size(); ++u) {
    prefix += sizes[u];
    const Rational next = u + 1 < gammas.size() ? gammas[u + 1] : Rational(0);
    if (gammas[u] == next) continue;
    denom += (gammas[u] - next) * lb_useful_count(kind, prefix, z);
  }
  if (denom <= 0) fail(Errc::Infeasible, "no useful products");
  return Rational(mk) / denom;
}

std::vector<Rational> lb_gammas(const std::vector<ClusterRates>& classes) {
  if (classes.empty()) fail(Errc::InvalidArgument, "no classes");
  const Rational lc = from_double(classes.back().lambda);
  std::vector<Rational> g;
  for (const ClusterRates& c : classes) g.push_back(from_double(c.lambda) / lc);
  return g;
}

LbRun simulate_lb(LbKind kind, ServiceModel model, const std::vector<ClusterRates>& classes, std::size_t mk,
                  std::size_t z, std::uint64_t seed) {
  if (model != ServiceModel::Model1) fail(Errc::ModelUnsupported, "load balancing is analyzed under Model 1 only");
  std::vector<std::size_t> sizes;
  for (const ClusterRates& c : classes) sizes.push_back(c.size);
  const std::vector<Rational> gammas = lb_gammas(classes);
  LbRun run;
  run.tau_c = lb_tau_c(kind, mk, gammas, sizes, z);
  const BigInt tc = ceil_rational(run.tau_c);
  for (const Rational& g : gammas) run.tau.push_back(ceil_rational(g * Rational(tc)).convert_to<std::size_t>());

  ServiceSampler sampler(model, seed, expand_profiles(classes), static_cast<double>(mk));
  std::size_t w = 0;
  for (std::size_t u = 0; u < classes.size(); ++u)
    for (std::size_t i = 0; i < classes[u].size; ++i, ++w)
      run.makespan = std::max(run.makespan, static_cast<double>(run.tau[u]) * sampler.next(w));
  return run;
}

}  // namespace rpm3
