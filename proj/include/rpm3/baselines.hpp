#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rpm3/rational.hpp"
#include "rpm3/sim.hpp"

namespace rpm3 {

/// Fixed-rate straggler-tolerant scheme: A split in m_I, B in k_I parts; any n - n_s workers decode.
struct KesParams {
  std::size_t n = 0, n_s = 0, z = 1, m = 1, k = 1;
  std::size_t m_I = 1, k_I = 1;
  bool exact = true;  ///< (m_I+z)(k_I+1)-1 == n - n_s

  std::size_t workers_needed() const { return (m_I + z) * (k_I + 1) - 1; }
  /// Block-sized tasks per worker, ceil(m/m_I) * ceil(k/k_I).
  std::size_t task_count() const;
  void validate() const;
};

/**
 * Best partition for n workers, n_s stragglers and z colluders. Among pairs with
 * (m_I+z)(k_I+1)-1 = n-n_s the product m_I k_I is maximized; only when no pair fits exactly are
 * pairs with <= considered (exact = false). Ties: fewer tasks, then smaller m_I. Throws Infeasible.
 */
KesParams kes_select(std::size_t n, std::size_t n_s, std::size_t z, std::size_t m, std::size_t k);

/// Largest z for which kes_select finds an exact fit; 0 if none.
std::size_t kes_max_exact_z(std::size_t n, std::size_t n_s, std::size_t m, std::size_t k);

/// m_I k_I / ((m_I+z)(k_I+1) - 1).
Rational kes_rate(const KesParams& p);

/// (n - n_s)-th smallest of the per-worker totals.
double kes_makespan(std::vector<double> totals, std::size_t n_s);

struct KesRun {
  double makespan = 0;
  std::vector<double> totals;  ///< per worker, in class order
};

/// Each worker runs task_count() block tasks under the service model; the master keeps the fastest n - n_s.
KesRun simulate_kes(const KesParams& p, ServiceModel model, const std::vector<ClusterRates>& classes,
                    std::uint64_t seed);

enum class LbKind { Ideal, GaspZ1, GaspLow, GaspMedium, GaspLarge, GaspBest };

const char* lb_kind_name(LbKind kind);

struct Partition {
  std::size_t m = 0, k = 0;
  std::size_t product() const { return m * k; }
};

/**
 * Largest m'k' whose worker-count identity fits in N workers for the given GASP regime:
 *   Z1:     m'k' + m' + k' <= N                    (z = 1)
 *   Low:    m'k' + m' + k' + z^2 + z - 3 <= N      (2 <= z < min)
 *   Medium: (m'+1)(k'+z) - 1 <= N                  (min <= z < max)
 *   Large:  2m'k' + 2z - 1 <= N                    (max <= z)
 * Infeasible if no pair meets the identity, RegimeViolation if none of those meets the regime.
 * With enforce_regime = false the regime condition is ignored.
 */
Partition gasp_partition(std::size_t N, std::size_t z, LbKind regime, bool enforce_regime = true);

/// Products per task-round obtained from the first N workers (prefix of clusters).
std::size_t lb_useful_count(LbKind kind, std::size_t N, std::size_t z);

/**
 * tau_c under perfect load balancing: mk / sum_u (gamma_u - gamma_{u+1}) useful(n_1 + ... + n_u),
 * gamma_{c+1} = 0. Requires gamma_c = 1 and gamma non-increasing.
 */
Rational lb_tau_c(LbKind kind, std::size_t mk, const std::vector<Rational>& gammas,
                  const std::vector<std::size_t>& sizes, std::size_t z);

/// gamma_u = lambda_u / lambda_c as exact rationals.
std::vector<Rational> lb_gammas(const std::vector<ClusterRates>& classes);

struct LbRun {
  Rational tau_c;               ///< unrounded
  std::vector<std::size_t> tau; ///< tasks per worker of each class after rounding up
  double makespan = 0;
};

/// Model-1 run with proportional task counts; rounds tau_c up, then each tau_u = ceil(gamma_u tau_c).
LbRun simulate_lb(LbKind kind, ServiceModel model, const std::vector<ClusterRates>& classes, std::size_t mk,
                  std::size_t z, std::uint64_t seed);

}  // namespace rpm3
