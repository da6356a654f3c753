#pragma once

#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <vector>

#include "rpm3/algebra.hpp"
#include "rpm3/lagrange.hpp"

namespace rpm3 {

/**
 * Scalar round (m = k = 1, 1x1 blocks, d = 1) small enough to enumerate every mask draw.
 * alphas holds z mask nodes followed by the payload node.
 */
struct TinyInstance {
  u64 q = 5;
  std::size_t n = 4, z = 1;
  std::vector<u64> alphas;
  std::vector<u64> betas;

  /// alphas = 1..z+1. Workers take the points outside alphas first, then mask nodes when q is too small.
  static TinyInstance standard(u64 q, std::size_t n, std::size_t z);
  /// Same layout with worker 0 moved onto the payload node.
  TinyInstance with_leaky_worker() const;

  /// Number of mask draws, q^(2z).
  std::uint64_t states() const;
  bool disjoint() const;
  /// Throws InstanceTooLarge above 10^7 states, InvalidArgument on a malformed layout.
  void validate() const;
};

/// Counts of the colluders' share tuple (f(b_1), g(b_1), ..., f(b_z), g(b_z)) over all mask draws.
struct ShareHistogram {
  u64 q = 0;
  std::size_t width = 0;  ///< tuple length
  std::vector<std::uint64_t> counts;

  std::uint64_t draws() const;
  bool uniform() const;
  /// FNV-1a over the count vector.
  std::uint64_t checksum() const;
};

ShareHistogram share_distribution(const TinyInstance& inst, u64 a, u64 b, const std::vector<std::size_t>& zset);

struct SubsetVerdict {
  std::vector<std::size_t> workers;
  bool uniform = false;
  bool independent = false;  ///< same histogram for every (A, B)
  double mutual_information = 0;  ///< bits, (A, B) uniform over the grid
  std::uint64_t checksum = 0;
  bool recovered = false;  ///< masks recovered from the shares and A
  bool pass() const { return uniform && independent; }
};

struct AuditReport {
  TinyInstance inst;
  std::vector<SubsetVerdict> subsets;
  bool cross_round = false;  ///< two rounds jointly uniform for every z-subset
  bool pass() const;
};

/// Exhaustive audit over every z-subset and every (A, B) in F_q^2.
AuditReport audit(const TinyInstance& inst, bool check_cross_round = true);

/**
 * Masks R_1..R_z from z shares f(x_j) and the payload blocks: removes the payload term, divides by
 * w(x) = prod (x - payload node) and interpolates the degree z-1 quotient at the mask nodes.
 */
std::vector<FMatrix> recover_randomness(const Field& f, const std::vector<u64>& alphas, std::size_t z,
                                        const std::vector<FMatrix>& payload, const std::vector<Sample>& shares);

nlohmann::json to_json(const AuditReport& r);

}  // namespace rpm3
