#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rpm3/algebra.hpp"

namespace rpm3 {

/// Index sets of one Fountain packet. Indices are 0-based and sorted.
struct FountainSpec {
  std::vector<std::size_t> sa;
  std::vector<std::size_t> sb;

  std::size_t degree() const { return sa.size() * sb.size(); }
  bool operator==(const FountainSpec& o) const { return sa == o.sa && sb == o.sb; }
};

struct SolitonParams {
  double c = 0.1;
  double delta = 0.5;
};

/// Robust soliton distribution over total product degree D in [1, K].
class RobustSoliton {
 public:
  RobustSoliton(std::size_t K, SolitonParams params = {});

  std::size_t K() const { return pmf_.size() - 1; }
  double pmf(std::size_t d) const { return d < pmf_.size() ? pmf_[d] : 0.0; }
  /// One uniform01() draw, inverted through the cumulative table.
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<double> pmf_;  // index 0 unused
  std::vector<double> cdf_;
};

/**
 * Draws a packet spec for an m x k grid.
 *
 * Draw order: D from the soliton (repeated until D has a factorization d_A * d_B with
 * d_A <= m, d_B <= k), one uniform_below() choosing the factor pair, then d_A and d_B
 * partial Fisher-Yates draws for the row and column index sets.
 */
FountainSpec sample_spec(Rng& rng, std::size_t m, std::size_t k, const RobustSoliton& dist);

/// (sum of ablocks over sa, sum of bblocks over sb).
std::pair<FMatrix, FMatrix> encode_blocks(const FountainSpec& spec, const std::vector<FMatrix>& ablocks,
                                          const std::vector<FMatrix>& bblocks);

/// Peeling decoder over the m x k grid of product cells A_i B_j.
class DecodedGrid {
 public:
  DecodedGrid(std::size_t m, std::size_t k);

  /// Feeds one packet whose value is sum over sa x sb of A_i B_j.
  void peel(const FountainSpec& spec, FMatrix value);

  std::size_t m() const { return m_; }
  std::size_t k() const { return k_; }
  std::size_t resolved() const { return resolved_; }
  bool complete() const { return resolved_ == m_ * k_; }
  std::size_t pending() const;
  const std::optional<FMatrix>& cell(std::size_t i, std::size_t j) const { return cells_[i * k_ + j]; }

  /// Stitches resolved cells into the full product; requires complete().
  FMatrix assemble() const;

 private:
  struct Pending {
    std::vector<std::size_t> unknown;
    FMatrix residual;
    bool alive;
  };

  void settle(std::size_t cell, FMatrix value);

  std::size_t m_, k_;
  std::size_t resolved_ = 0;
  std::vector<std::optional<FMatrix>> cells_;
  std::vector<Pending> packets_;
  std::vector<std::vector<std::size_t>> watchers_;
};

/// True iff the GF(2) incidence vectors of the specs span all m*k unit vectors.
bool ge_solvable(const std::vector<FountainSpec>& specs, std::size_t m, std::size_t k);

}  // namespace rpm3
