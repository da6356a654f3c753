#include "rpm3/analysis.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "rpm3/baselines.hpp"
#include "rpm3/error.hpp"

namespace rpm3 {

Rational harmonic(std::size_t n) {
  Rational h = 0;
  for (std::size_t i = 1; i <= n; ++i) h += Rational(1, i);
  return h;
}

long double harmonic_ld(std::size_t n) {
  long double h = 0;
  for (std::size_t i = n; i >= 1; --i) h += 1.0L / static_cast<long double>(i);
  return h;
}

std::size_t rpm3_max_z(std::size_t n1) { return n1 >= 3 ? (n1 - 1) / 2 : 0; }

void RateInputs::validate(bool monotone) const {
  if (gammas.empty()) fail(Errc::InvalidArgument, "no clusters");
  if (gammas.back() != 1) fail(Errc::InvalidArgument, "gamma_c must be 1");
  if (eps < 0) fail(Errc::InvalidArgument, "eps must be non-negative");
  if (tau_c <= 0) fail(Errc::InvalidArgument, "tau_c must be positive");
  if (monotone)
    for (std::size_t u = 1; u < gammas.size(); ++u)
      if (gammas[u] > gammas[u - 1]) fail(Errc::InvalidArgument, "gammas must be non-increasing");
}

Rational rate_rpm3(const RateInputs& in) {
  const Rational mk(in.m * in.k);
  Rational sum = 0;
  for (const Rational& g : in.gammas) sum += g;
  const Rational denom = 2 * mk * (1 + in.eps) + Rational(in.z - 1) * in.tau_c * sum +
                         Rational(in.z) * in.tau_c * in.gammas.at(0);
  return mk / denom;
}

RateInputs rate_inputs_from_stats(const RunStats& s, std::size_t m, std::size_t k) {
  if (m * k != s.mk) fail(Errc::InvalidArgument, "m*k does not match the run");
  std::size_t c = s.tau.size();
  while (c > 0 && s.tau[c - 1] == 0) --c;
  if (c == 0) fail(Errc::InvalidArgument, "run has no interpolations");
  RateInputs in;
  in.m = m;
  in.k = k;
  in.z = s.z;
  in.eps = s.epsilon();
  in.tau_c = s.tau[c - 1];
  for (std::size_t u = 0; u < c; ++u) in.gammas.push_back(Rational(s.tau[u]) / in.tau_c);
  in.validate(false);
  return in;
}

Rational rpm3_tau_c(std::size_t mk, const Rational& eps, const std::vector<Rational>& gammas,
                    const std::vector<std::size_t>& d) {
  if (gammas.size() != d.size()) fail(Errc::InvalidArgument, "gammas and payloads differ");
  Rational denom = 0;
  for (std::size_t u = 0; u < d.size(); ++u) denom += gammas[u] * d[u];
  if (denom <= 0) fail(Errc::Infeasible, "no payload");
  return Rational(mk) * (1 + eps) / denom;
}

std::size_t BoundInputs::u_star() const {
  if (lambdas.empty() || lambdas.size() != taus.size()) fail(Errc::InvalidArgument, "bound inputs incomplete");
  std::size_t best = 0;
  for (std::size_t u = 1; u < lambdas.size(); ++u)
    if (lambdas[u] / static_cast<double>(taus[u]) < lambdas[best] / static_cast<double>(taus[best])) best = u;
  return best;
}

std::size_t BoundInputs::tau_max() const { return *std::max_element(taus.begin(), taus.end()); }

double BoundInputs::s_m() const {
  double s = 0;
  for (std::size_t u = 0; u < taus.size(); ++u) s = std::max(s, shifts.at(u) * static_cast<double>(taus[u]));
  return s;
}

void BoundInputs::check_convention() const {
  if (shifts.size() != lambdas.size()) fail(Errc::ConventionViolation, "shifts missing");
  for (std::size_t u = 0; u < lambdas.size(); ++u)
    if (std::abs(lambdas[u] * shifts[u] - t_m) > 1e-9 * std::max(1.0, std::abs(t_m)))
      fail(Errc::ConventionViolation, "lambda*shift != t_m in cluster " + std::to_string(u + 1));
}

BoundInputs bound_inputs_from_run(const RunStats& s, const std::vector<ClusterRates>& classes, double t_m) {
  std::vector<WorkerProfile> prof = expand_profiles(classes);
  BoundInputs in;
  in.n = s.n;
  in.mk = s.mk;
  in.t_m = t_m;
  const std::size_t c = s.plan.c();
  in.lambdas.assign(c, std::numeric_limits<double>::infinity());
  in.shifts.assign(c, 0.0);
  for (std::size_t w = 0; w < prof.size() && w < s.plan.membership.size(); ++w) {
    const std::size_t u = s.plan.membership[w];
    if (u == kUnassigned) continue;
    if (prof[w].lambda < in.lambdas[u]) {
      in.lambdas[u] = prof[w].lambda;
      in.shifts[u] = prof[w].shift;
    }
  }
  for (std::size_t u = 0; u < c; ++u) {
    if (!std::isfinite(in.lambdas[u])) {
      // nobody ranked into this cluster before the run ended: it never ran past round 1
      double lo = std::numeric_limits<double>::infinity(), sh = 0;
      for (const WorkerProfile& p : prof)
        if (p.lambda < lo) lo = p.lambda, sh = p.shift;
      in.lambdas[u] = lo;
      in.shifts[u] = sh;
    }
    in.taus.push_back(s.tasks(u));
  }
  return in;
}

double rpm3_cdf_bound_m1(const BoundInputs& in, double x) {
  const std::size_t u = in.u_star();
  const double rate = in.lambdas[u] * static_cast<double>(in.mk) / static_cast<double>(in.taus[u]);
  const double e = std::exp(in.t_m - rate * x);
  if (e >= 1) return 1.0;
  const double p = -std::expm1(static_cast<double>(in.n) * std::log1p(-e));
  return std::clamp(p, 0.0, 1.0);
}

double rpm3_mean_bound_m1(const BoundInputs& in) {
  in.check_convention();
  const std::size_t u = in.u_star();
  return (in.t_m + static_cast<double>(harmonic_ld(in.n))) * static_cast<double>(in.taus[u]) /
         (in.lambdas[u] * static_cast<double>(in.mk));
}

double kes_mean_lower_m1(std::size_t n, std::size_t n_s, double t_m, double lambda1, std::size_t m_I,
                         std::size_t k_I) {
  if (n_s >= n) fail(Errc::InvalidArgument, "n_s must be below n");
  const double h = static_cast<double>(harmonic_ld(n) - harmonic_ld(n - n_s));
  return (t_m + h) / (lambda1 * static_cast<double>(m_I * k_I));
}

namespace {

BigInt binom(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  BigInt b = 1;
  for (std::size_t i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

BigInt factorial(std::size_t n) {
  BigInt f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

// Rough count of big-integer multiply-adds the exact path performs.
double exact_work(std::size_t n, std::size_t d, std::size_t shape) {
  const double r_hi = static_cast<double>(n);
  const double deg = r_hi * static_cast<double>(shape - 1) + 1;
  return static_cast<double>(d) * deg * static_cast<double>(shape) + static_cast<double>(d) * deg;
}

long double quadrature_mean(std::size_t n, std::size_t d, std::size_t shape) {
  const long double a = static_cast<long double>(n - d + 1), b = static_cast<long double>(d);
  const long double nn = static_cast<long double>(n);
  auto survival = [&](long double x) -> long double {
    if (x <= 0) return 1.0L;
    const long double q = boost::math::gamma_q(static_cast<long double>(shape), x);
    if (d == n) return -std::expm1(nn * std::log1p(-q));
    return boost::math::ibeta(a, b, q);
  };
  long double upper = static_cast<long double>(shape) + 10 * std::sqrt(static_cast<long double>(shape)) +
                      2 * std::log(nn + 1) + 10;
  while (survival(upper) * upper > 1e-20L) upper *= 2;
  // split the range so the adaptive rule sees the bulk at its own scale
  const int pieces = 8;
  long double total = 0;
  for (int i = 0; i < pieces; ++i) {
    const long double lo = upper * i / pieces, hi = upper * (i + 1) / pieces;
    total += boost::math::quadrature::gauss_kronrod<long double, 61>::integrate(survival, lo, hi, 15, 1e-12L);
  }
  return total;
}

}  // namespace

Rational erlang_order_stat_mean_exact(std::size_t n, std::size_t d, std::size_t shape) {
  if (n < 1 || d < 1 || d > n || shape < 1) fail(Errc::InvalidArgument, "need 1 <= d <= n and shape >= 1");
  const std::size_t tm1 = shape - 1;
  const BigInt fact_tm1 = factorial(tm1);
  // p_i = (shape-1)!/i!, so (sum_i x^i/i!)^r = (sum_i p_i x^i)^r / ((shape-1)!)^r
  std::vector<BigInt> p(shape);
  for (std::size_t i = 0; i < shape; ++i) p[i] = fact_tm1 / factorial(i);

  std::vector<BigInt> poly{1};
  const std::size_t r0 = n - d;
  for (std::size_t r = 0; r < r0; ++r) {
    std::vector<BigInt> next(poly.size() + tm1, 0);
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = 0; j < shape; ++j) next[i + j] += poly[i] * p[j];
    poly.swap(next);
  }
  std::vector<BigInt> fact_cache(shape + poly.size() + (d - 1) * tm1 + 1);
  fact_cache[0] = 1;
  for (std::size_t i = 1; i < fact_cache.size(); ++i) fact_cache[i] = fact_cache[i - 1] * i;

  Rational sum = 0;
  BigInt fact_pow = pow(fact_tm1, static_cast<unsigned>(r0));
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t r = r0 + j;
    const BigInt base = r + 1;
    const std::size_t L = poly.size() - 1;
    // S_r = sum_l A_l (shape+l)! / base^(shape+l+1), over the common denominator base^(shape+L+1)
    BigInt num = 0;
    BigInt bpow = 1;
    for (std::size_t l = L + 1; l-- > 0;) {
      num += poly[l] * fact_cache[shape + l] * bpow;
      bpow *= base;
    }
    const BigInt den = pow(base, static_cast<unsigned>(shape + L + 1)) * fact_pow;
    Rational term(num, den);
    term *= binom(d - 1, j);
    if (j % 2) sum -= term;
    else sum += term;
    if (j + 1 < d) {
      std::vector<BigInt> next(poly.size() + tm1, 0);
      for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t jj = 0; jj < shape; ++jj) next[i + jj] += poly[i] * p[jj];
      poly.swap(next);
      fact_pow *= fact_tm1;
    }
  }
  return sum * Rational(binom(n, d) * d, fact_tm1);
}

long double erlang_order_stat_mean(std::size_t n, std::size_t d, std::size_t shape, long double rate,
                                   long double shift, OrderStatMethod method) {
  if (n < 1 || d < 1 || d > n || shape < 1) fail(Errc::InvalidArgument, "need 1 <= d <= n and shape >= 1");
  if (!(rate > 0)) fail(Errc::InvalidArgument, "rate must be positive");
  if (method == OrderStatMethod::Auto) {
    const bool small = (n <= 120 || shape == 1) && n <= 500 && exact_work(n, d, shape) <= 1e5;
    method = small ? OrderStatMethod::Exact : OrderStatMethod::Quadrature;
  }
  long double unit;
  if (method == OrderStatMethod::Exact) unit = to_long_double(erlang_order_stat_mean_exact(n, d, shape));
  else unit = quadrature_mean(n, d, shape);
  return shift + unit / rate;
}

long double erlang_max_mean(std::size_t n, std::size_t shape, long double rate, long double shift,
                            OrderStatMethod method) {
  return erlang_order_stat_mean(n, n, shape, rate, shift, method);
}

long double rpm3_mean_bound_m2(const BoundInputs& in) {
  const double lc = *std::min_element(in.lambdas.begin(), in.lambdas.end());
  const long double km = static_cast<long double>(in.mk);
  return in.s_m() / km + erlang_max_mean(in.n, in.tau_max(), lc * km, 0);
}

long double kes_mean_lower_m2(std::size_t n, std::size_t n_s, std::size_t shape, long double rate,
                              long double shift) {
  if (n_s >= n) fail(Errc::InvalidArgument, "n_s must be below n");
  return erlang_order_stat_mean(n, n - n_s, shape, rate, shift);
}

double lb_mean(const Rational& tau_c_lb, double s_c, double lambda_c, std::size_t n, std::size_t mk) {
  if (tau_c_lb <= 0) fail(Errc::InvalidArgument, "tau_c must be positive");
  const double t = to_double(tau_c_lb), km = static_cast<double>(mk);
  return s_c * t / km + static_cast<double>(harmonic_ld(n)) * t / (lambda_c * km);
}

LbGapFactors lb_gap_factors(const LbGapInputs& in) {
  const std::size_t c = in.gammas.size();
  if (c == 0 || in.sizes.size() != c || in.lambdas.size() != c) fail(Errc::InvalidArgument, "inputs differ in length");
  std::vector<std::size_t> d;
  for (std::size_t u = 0; u < c; ++u) {
    d.push_back(u == 0 ? first_cluster_payload(in.sizes[0], in.z) : later_cluster_payload(in.sizes[u], in.z));
    if (d.back() < 1) fail(Errc::Infeasible, "cluster " + std::to_string(u + 1) + " has no payload");
  }
  std::vector<Rational> lam;
  for (double l : in.lambdas) lam.push_back(from_double(l));

  LbGapFactors f;
  for (std::size_t u = 1; u < c; ++u)
    if (lam[u] / in.gammas[u] < lam[f.u_star] / in.gammas[f.u_star]) f.u_star = u;
  const std::size_t us = f.u_star;
  const Rational speed = lam.back() / lam[us];
  const Rational g_us = in.gammas[us];

  const Rational tau_rpm3 = rpm3_tau_c(in.mk, in.eps, in.gammas, d);
  const Rational tau_id = lb_tau_c(LbKind::Ideal, in.mk, in.gammas, in.sizes, in.z);
  f.ideal = g_us * tau_rpm3 / tau_id * speed;

  Rational sgn = 0, sg = 0, sgd = 0;
  for (std::size_t u = 0; u < c; ++u) {
    sgn += in.gammas[u] * in.sizes[u];
    sg += in.gammas[u];
    sgd += in.gammas[u] * d[u];
  }
  const Rational g1 = in.gammas[0];
  const Rational z(in.z);
  const Rational ideal_den = sgn - g1 * z;
  f.ideal_closed = g_us * (1 + in.eps) * ideal_den / sgd * speed;
  f.ideal_bracket = 2 * g_us * (1 + in.eps) * speed / (1 - (z + 1) * sg / ideal_den);

  const Rational tau_large = lb_tau_c(LbKind::GaspLarge, in.mk, in.gammas, in.sizes, in.z);
  f.large = g_us * tau_rpm3 / tau_large * speed;
  const Rational large_den = sgn - g1 * (2 * z - 1);
  f.large_bracket = g_us * (1 + in.eps) / (1 - ((sg - g1) * (z + 1) + 2 * g1) / large_den) * speed;
  return f;
}

}  // namespace rpm3
