#include <doctest.h>

#include <cmath>
#include <functional>

#include "rpm3/analysis.hpp"
#include "rpm3/baselines.hpp"
#include "rpm3/error.hpp"

using namespace rpm3;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::InvalidArgument;
}

// Best product over every (m_I, k_I); equality pairs win when any exist.
struct KesOracle {
  std::size_t product = 0;
  bool exact = false;
};

KesOracle kes_oracle(std::size_t n, std::size_t n_s, std::size_t z, std::size_t m, std::size_t k) {
  KesOracle eq, le;
  const std::size_t budget = n - n_s;
  for (std::size_t a = 1; a <= m; ++a)
    for (std::size_t b = 1; b <= k; ++b) {
      const std::size_t need = (a + z) * (b + 1) - 1;
      if (need == budget) eq.product = std::max(eq.product, a * b);
      if (need <= budget) le.product = std::max(le.product, a * b);
    }
  if (eq.product) {
    eq.exact = true;
    return eq;
  }
  return le;
}

std::size_t gasp_oracle(std::size_t N, std::size_t z, LbKind r, bool enforce) {
  std::size_t best = 0;
  for (std::size_t a = 1; a <= N; ++a)
    for (std::size_t b = 1; b <= N; ++b) {
      std::size_t need = 0;
      bool regime = true;
      switch (r) {
        case LbKind::GaspZ1: need = a * b + a + b; break;
        case LbKind::GaspLow:
          need = a * b + a + b + z * z + z - 3;
          regime = z >= 2 && z < std::min(a, b);
          break;
        case LbKind::GaspMedium:
          need = (a + 1) * (b + z) - 1;
          regime = std::min(a, b) <= z && z < std::max(a, b);
          break;
        case LbKind::GaspLarge:
          need = 2 * a * b + 2 * z - 1;
          regime = z >= std::max(a, b);
          break;
        default: break;
      }
      if (need <= N && (regime || !enforce)) best = std::max(best, a * b);
    }
  return best;
}

}  // namespace

TEST_CASE("kes_select examples") {
  const KesParams p = kes_select(9, 1, 1, 10, 10);
  CHECK(p.m_I * p.k_I == 4);
  CHECK(p.m_I == 2);
  CHECK(p.k_I == 2);
  CHECK(p.exact);
  CHECK(kes_select(1000, 230, 256, 1000, 1000).exact);
  CHECK(kes_max_exact_z(1000, 230, 1000, 1000) == 256);
  CHECK(code_of([] { kes_select(5, 2, 3, 4, 4); }) == Errc::Infeasible);
}

TEST_CASE("kes_select is optimal against exhaustive search") {
  Rng rng(12);
  for (int rep = 0; rep < 400; ++rep) {
    const std::size_t n = 3 + rng.uniform_below(120);
    const std::size_t n_s = rng.uniform_below(n - 2);
    const std::size_t z = 1 + rng.uniform_below(6);
    const std::size_t m = 1 + rng.uniform_below(30), k = 1 + rng.uniform_below(30);
    if (n - n_s <= z) continue;
    const KesOracle o = kes_oracle(n, n_s, z, m, k);
    if (o.product == 0) {
      CHECK(code_of([&] { kes_select(n, n_s, z, m, k); }) == Errc::Infeasible);
      continue;
    }
    const KesParams p = kes_select(n, n_s, z, m, k);
    CHECK(p.m_I * p.k_I == o.product);
    CHECK(p.exact == o.exact);
    CHECK(p.workers_needed() <= n - n_s);
    CHECK(p.m_I <= m);
    CHECK(p.k_I <= k);
  }
}

TEST_CASE("kes_rate examples") {
  KesParams p;
  p.n = 10;
  p.m = p.k = 4;
  p.z = 1;
  p.m_I = p.k_I = 2;
  CHECK(kes_rate(p) == Rational(1, 2));
  p.m_I = p.k_I = 1;
  CHECK(kes_rate(p) == Rational(1, 3));
  p.z = 2;
  p.m_I = 3;
  p.k_I = 2;
  p.n = 14;
  CHECK(kes_rate(p) == Rational(6, 14));
  p.n = 13;
  CHECK(code_of([&] { (void)kes_rate(p); }) == Errc::Infeasible);
}

TEST_CASE("kes_makespan order statistic") {
  CHECK(kes_makespan({3, 3, 3, 3}, 0) == 3);
  CHECK(kes_makespan({5, 1, 4, 2}, 0) == 5);
  CHECK(kes_makespan({5, 1, 4, 2}, 1) == 4);
  CHECK(kes_makespan({5, 1, 4, 2}, 3) == 1);
  Rng rng(2);
  std::vector<double> t(50);
  for (auto& x : t) x = rng.uniform01();
  for (std::size_t s = 1; s < t.size(); ++s) CHECK(kes_makespan(t, s) <= kes_makespan(t, s - 1));
}

TEST_CASE("simulate_kes totals follow the service sampler") {
  const KesParams p = kes_select(12, 2, 1, 6, 4);
  const std::vector<ClusterRates> cls{{5, 2.0, 0.5}, {7, 1.0, 1.0}};
  const KesRun r = simulate_kes(p, ServiceModel::Model1, cls, 31);
  ServiceSampler s(ServiceModel::Model1, 31, expand_profiles(cls), 24.0);
  for (std::size_t w = 0; w < 12; ++w) CHECK(r.totals[w] == doctest::Approx(p.task_count() * s.next(w)).epsilon(1e-12));
  CHECK(r.makespan == kes_makespan(r.totals, 2));
}

TEST_CASE("simulate_kes mean respects the Model-1 lower bound") {
  const std::size_t n = 4, n_s = 1;
  const double t_m = 1.0, lambda = 1.0;
  const KesParams p = kes_select(n, n_s, 1, 2, 2);
  const std::vector<ClusterRates> cls{{n, lambda, t_m / lambda}};
  const int reps = 10000;
  double sum = 0;
  for (int i = 0; i < reps; ++i) sum += simulate_kes(p, ServiceModel::Model1, cls, 1000 + i).makespan;
  const double mean = sum / reps;
  CHECK(mean >= kes_mean_lower_m1(n, n_s, t_m, lambda, p.m_I, p.k_I));
  // Equal rates: exact mean is tasks * (s/mk + (H_n - H_{n_s}) / (lambda mk)).
  const double mk = 4.0, tasks = static_cast<double>(p.task_count());
  const double exact = tasks * (t_m / mk + (25.0 / 12 - 1.0) / (lambda * mk));
  CHECK(mean == doctest::Approx(exact).epsilon(0.03));
}

TEST_CASE("gasp_partition examples") {
  const Partition z1 = gasp_partition(8, 1, LbKind::GaspZ1);
  CHECK(z1.m == 2);
  CHECK(z1.k == 2);
  const Partition low = gasp_partition(11, 2, LbKind::GaspLow, false);
  CHECK(low.m == 2);
  CHECK(low.k == 2);
  CHECK(code_of([] { gasp_partition(11, 2, LbKind::GaspLow); }) == Errc::RegimeViolation);
  CHECK(code_of([] { gasp_partition(2, 1, LbKind::GaspZ1); }) == Errc::Infeasible);
  CHECK(code_of([] { gasp_partition(20, 2, LbKind::GaspZ1); }) == Errc::RegimeViolation);
}

TEST_CASE("gasp_partition matches exhaustive search") {
  const LbKind regimes[] = {LbKind::GaspLow, LbKind::GaspMedium, LbKind::GaspLarge};
  for (std::size_t z = 1; z <= 5; ++z)
    for (std::size_t N = 1; N <= 60; ++N)
      for (bool enforce : {false, true}) {
        for (LbKind r : regimes) {
          const std::size_t want = gasp_oracle(N, z, r, enforce);
          const std::size_t any = gasp_oracle(N, z, r, false);
          if (any == 0) {
            CHECK(code_of([&] { gasp_partition(N, z, r, enforce); }) == Errc::Infeasible);
          } else if (want == 0) {
            CHECK(code_of([&] { gasp_partition(N, z, r, enforce); }) == Errc::RegimeViolation);
          } else {
            CHECK(gasp_partition(N, z, r, enforce).product() == want);
          }
        }
        if (z == 1 && gasp_oracle(N, 1, LbKind::GaspZ1, false) > 0)
          CHECK(gasp_partition(N, 1, LbKind::GaspZ1, enforce).product() == gasp_oracle(N, 1, LbKind::GaspZ1, false));
      }
}

TEST_CASE("lb_tau_c examples") {
  const std::vector<Rational> g{12, 9, 6, 3, 1};
  const std::vector<std::size_t> sizes{220, 240, 160, 150, 230};
  const Rational tc = lb_tau_c(LbKind::Ideal, 6000000, g, sizes, 10);
  CHECK(tc == Rational(6000000, 6320));
  CHECK(to_double(tc) == doctest::Approx(949.367).epsilon(1e-6));

  CHECK(lb_tau_c(LbKind::Ideal, 100, {1}, {30}, 5) == Rational(100, 25));
  CHECK(lb_tau_c(LbKind::GaspLarge, 100, {1}, {31}, 5) == Rational(200, 22));

  CHECK(code_of([] { lb_tau_c(LbKind::Ideal, 100, {2, 3, 1}, {5, 5, 5}, 1); }) == Errc::InvalidArgument);
  CHECK(code_of([] { lb_tau_c(LbKind::Ideal, 100, {3, 2}, {5, 5}, 1); }) == Errc::InvalidArgument);
}

TEST_CASE("lb_tau_c telescoping identity and ordering") {
  Rng rng(44);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t c = 1 + rng.uniform_below(5);
    const std::size_t z = 1 + rng.uniform_below(4);
    std::vector<std::size_t> sizes(c);
    for (auto& s : sizes) s = 2 * z + 2 + rng.uniform_below(40);
    std::vector<Rational> g(c);
    g[c - 1] = 1;
    for (std::size_t u = c - 1; u-- > 0;) g[u] = g[u + 1] + Rational(rng.uniform_below(4), 1 + rng.uniform_below(3));
    const std::size_t mk = 100 + rng.uniform_below(10000);
    for (LbKind kind : {LbKind::Ideal, LbKind::GaspLarge, LbKind::GaspBest}) {
      const Rational tc = lb_tau_c(kind, mk, g, sizes, z);
      Rational total = 0;
      std::size_t prefix = 0;
      for (std::size_t u = 0; u < c; ++u) {
        prefix += sizes[u];
        const Rational next = u + 1 < c ? g[u + 1] * tc : Rational(0);
        total += (g[u] * tc - next) * lb_useful_count(kind, prefix, z);
      }
      CHECK(total == Rational(mk));
    }
    const Rational ideal = lb_tau_c(LbKind::Ideal, mk, g, sizes, z);
    CHECK(ideal <= lb_tau_c(LbKind::GaspLarge, mk, g, sizes, z));
    CHECK(ideal <= lb_tau_c(LbKind::GaspBest, mk, g, sizes, z));
  }
}

TEST_CASE("lb_gammas are rate ratios") {
  const auto g = lb_gammas({{10, 4.0, 0}, {10, 2.0, 0}, {5, 0.5, 0}});
  CHECK(g == std::vector<Rational>{8, 4, 1});
}

TEST_CASE("simulate_lb") {
  CHECK(code_of([] { simulate_lb(LbKind::Ideal, ServiceModel::Model2, {{10, 1, 0}}, 16, 2, 1); }) ==
        Errc::ModelUnsupported);

  const LbRun same = simulate_lb(LbKind::Ideal, ServiceModel::Model1, {{6, 1, 0}, {4, 1, 0}}, 16, 2, 1);
  CHECK(same.tau == std::vector<std::size_t>{2, 2});

  const LbRun mixed = simulate_lb(LbKind::Ideal, ServiceModel::Model1, {{6, 3, 0}, {4, 1, 0}}, 50, 2, 1);
  CHECK(mixed.tau_c == Rational(50, 3 * 6 + 4 - 3 * 2));
  CHECK(mixed.tau == std::vector<std::size_t>{12, 4});
}

TEST_CASE("simulate_lb mean matches the closed form for identical workers") {
  const std::size_t n = 10, z = 2, mk = 16;
  const double lambda = 1.5, t_m = 0.5, s = t_m / lambda;
  const std::vector<ClusterRates> cls{{n, lambda, s}};
  const int reps = 10000;
  double sum = 0, sq = 0;
  Rational tc;
  for (int i = 0; i < reps; ++i) {
    const LbRun r = simulate_lb(LbKind::Ideal, ServiceModel::Model1, cls, mk, z, 7000 + i);
    sum += r.makespan;
    sq += r.makespan * r.makespan;
    tc = Rational(r.tau[0]);
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sq / reps - mean * mean) / reps);
  const double want = lb_mean(tc, s, lambda, n, mk);
  CHECK(std::abs(mean - want) <= 3 * se);
}
