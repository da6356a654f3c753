#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rpm3/algebra.hpp"

namespace rpm3 {

/// Lagrange nodes and worker evaluation points.
struct EvalPoints {
  std::vector<u64> alphas;  ///< d_max + z nodes; alphas[0..z) carry masks
  std::vector<u64> betas;   ///< one per worker, disjoint from alphas

  /// alphas = 1..d_max+z, betas = d_max+z+1..d_max+z+n.
  static EvalPoints canonical(const Field& f, std::size_t d_max, std::size_t z, std::size_t n);
  void validate(const Field& f) const;
};

/// Masks and payload of one polynomial pair (f, g) for a round and cluster.
struct PolyPair {
  std::size_t z = 0;
  std::size_t d = 0;
  std::vector<FMatrix> randoms_f;  ///< R_{t,1..z}
  std::vector<FMatrix> randoms_g;  ///< S_{t,1..z}
  std::vector<FMatrix> payload_f;  ///< coded A blocks
  std::vector<FMatrix> payload_g;  ///< coded B blocks

  void validate() const;
};

/// Values L_0(x)..L_{N-1}(x) of the Lagrange basis over the given nodes.
std::vector<u64> lagrange_basis(const Field& f, const std::vector<u64>& nodes, u64 x);

/// Evaluates (f(x), g(x)) for the pair over nodes alphas[0..d+z).
std::pair<FMatrix, FMatrix> eval_pair(const PolyPair& p, const EvalPoints& pts, u64 x);

struct Sample {
  u64 x;
  FMatrix y;
};

/**
 * Evaluates at each target the unique polynomial of degree <= degree_bound through the first
 * degree_bound + 1 samples. Remaining samples are checked against that polynomial.
 */
std::vector<FMatrix> interpolate_at(const Field& f, const std::vector<Sample>& samples,
                                    std::size_t degree_bound, const std::vector<u64>& targets);

struct ProductDegree {
  std::size_t degree;  ///< 2(d + z - 1)
  std::size_t points;  ///< 2d + 2z - 1
};

ProductDegree product_degree(std::size_t d, std::size_t z);

}  // namespace rpm3
