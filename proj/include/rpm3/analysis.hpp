#pragma once

#include <cstddef>
#include <vector>

#include "rpm3/protocol.hpp"
#include "rpm3/rational.hpp"

namespace rpm3 {

/// H_n = 1 + 1/2 + ... + 1/n, H_0 = 0.
Rational harmonic(std::size_t n);
/// Floating harmonic number (summed from the small end).
long double harmonic_ld(std::size_t n);

/// Largest z with floor((n_1 - 2z + 1)/2) >= 1.
std::size_t rpm3_max_z(std::size_t n1);

struct RateInputs {
  std::size_t m = 1, k = 1, z = 1;
  Rational eps = 0;
  Rational tau_c = 1;
  std::vector<Rational> gammas;  ///< gamma_1..gamma_c, gamma_c = 1

  std::size_t c() const { return gammas.size(); }
  /// Checks gamma_c = 1, eps >= 0 and, if monotone, that gamma is non-increasing.
  void validate(bool monotone = true) const;
};

/// mk / (2mk(1+eps) + (z-1) tau_c sum(gamma) + z tau_c gamma_1).
Rational rate_rpm3(const RateInputs& in);

/// Reads (tau_u, eps) off a run. tau_c is taken from the last cluster that interpolated at all.
RateInputs rate_inputs_from_stats(const RunStats& s, std::size_t m, std::size_t k);

/// tau_c = mk(1+eps) / sum_u gamma_u d_u.
Rational rpm3_tau_c(std::size_t mk, const Rational& eps, const std::vector<Rational>& gammas,
                    const std::vector<std::size_t>& d);

/// Per-cluster quantities for the waiting-time bounds; cluster indices are 0-based.
struct BoundInputs {
  std::size_t n = 1, mk = 1;
  double t_m = 0;
  std::vector<double> lambdas;
  std::vector<double> shifts;
  std::vector<std::size_t> taus;

  /// argmin_u lambda_u / tau_u, ties to the smallest index.
  std::size_t u_star() const;
  std::size_t tau_max() const;
  /// max_u s_u tau_u.
  double s_m() const;
  /// Throws ConventionViolation unless lambda_u s_u = t_m for every u.
  void check_convention() const;
};

/// Per protocol cluster of a run: min member lambda, min member shift, and tasks up to the last useful round.
BoundInputs bound_inputs_from_run(const RunStats& s, const std::vector<ClusterRates>& classes, double t_m);

/// Upper bound on P(T > x) under Model 1: 1 - (1 - exp(t_m - lambda* mk x / tau*))^n, clamped to [0, 1].
double rpm3_cdf_bound_m1(const BoundInputs& in, double x);
/// (t_m + H_n) tau* / (lambda* mk).
double rpm3_mean_bound_m1(const BoundInputs& in);

/// (t_m + H_n - H_{n-n_s}) / (lambda_1 m_I k_I).
double kes_mean_lower_m1(std::size_t n, std::size_t n_s, double t_m, double lambda1, std::size_t m_I,
                         std::size_t k_I);

enum class OrderStatMethod { Auto, Exact, Quadrature };

/**
 * Mean of the d-th smallest of n iid shift + Erlang(shape, rate) variables. Exact uses the
 * alternating binomial sum in rational arithmetic; Quadrature integrates P(X_(d) > x) with
 * Gauss-Kronrod. Auto picks Exact when the rational work is small.
 */
long double erlang_order_stat_mean(std::size_t n, std::size_t d, std::size_t shape, long double rate,
                                   long double shift = 0, OrderStatMethod method = OrderStatMethod::Auto);
/// Same as above at rate 1 and shift 0, as an exact rational.
Rational erlang_order_stat_mean_exact(std::size_t n, std::size_t d, std::size_t shape);

long double erlang_max_mean(std::size_t n, std::size_t shape, long double rate, long double shift = 0,
                            OrderStatMethod method = OrderStatMethod::Auto);

/// s_m/km + E[max of n Erlang(tau_max, lambda_c km)], lambda_c the smallest rate.
long double rpm3_mean_bound_m2(const BoundInputs& in);

/// Mean of the (n - n_s)-th order statistic of n iid shifted Erlang(shape, rate).
long double kes_mean_lower_m2(std::size_t n, std::size_t n_s, std::size_t shape, long double rate,
                              long double shift);

/// s_c tau / km + H_n tau / (lambda_c mk).
double lb_mean(const Rational& tau_c_lb, double s_c, double lambda_c, std::size_t n, std::size_t mk);

struct LbGapInputs {
  std::size_t mk = 1, z = 1;
  Rational eps = 0;
  std::vector<Rational> gammas;
  std::vector<std::size_t> sizes;
  std::vector<double> lambdas;
};

struct LbGapFactors {
  std::size_t u_star = 0;
  Rational ideal;          ///< (tau_u* / tau_c^id)(lambda_c / lambda_u*) via both tau_c values
  Rational ideal_closed;   ///< same quantity from the d_u sums directly
  Rational ideal_bracket;  ///< relaxed form with the (z+1) bracket; an upper bound on `ideal`
  Rational large;          ///< against load balancing with the large-z GASP rate
  Rational large_bracket;
};

LbGapFactors lb_gap_factors(const LbGapInputs& in);

}  // namespace rpm3
