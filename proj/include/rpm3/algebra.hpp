#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "rpm3/rng.hpp"

namespace rpm3 {

using u64 = std::uint64_t;

/**
 * Prime field F_q with q < 2^32, so a product of two reduced elements fits in 64 bits.
 * Elements are plain u64 values in [0, q).
 */
class Field {
 public:
  static constexpr u64 kDefaultModulus = 2147483647ULL;  // 2^31 - 1

  explicit Field(u64 q = kDefaultModulus);

  u64 modulus() const { return q_; }
  u64 reduce(u64 a) const { return a % q_; }
  u64 from_int(long long v) const;
  u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= q_ ? s - q_ : s; }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + q_ - b; }
  u64 neg(u64 a) const { return a == 0 ? 0 : q_ - a; }
  u64 mul(u64 a, u64 b) const { return (a * b) % q_; }
  u64 pow(u64 a, u64 e) const;
  /// Multiplicative inverse; throws ZeroInverse for a == 0.
  u64 inv(u64 a) const;

  bool operator==(const Field& o) const { return q_ == o.q_; }

 private:
  u64 q_;
};

bool is_prime(u64 q);

/// field_inv as a free function for callers holding only a modulus.
u64 field_inv(const Field& f, u64 a);

/// Dense row-major matrix over a prime field.
class FMatrix {
 public:
  FMatrix(const Field& f, std::size_t rows, std::size_t cols);
  FMatrix(const Field& f, std::initializer_list<std::initializer_list<long long>> rows);

  static FMatrix identity(const Field& f, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Field& field() const { return field_; }

  u64 at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, u64 v) { data_[i * cols_ + j] = field_.reduce(v); }
  const std::vector<u64>& data() const { return data_; }
  std::vector<u64>& data() { return data_; }

  bool is_zero() const;
  bool same_shape(const FMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  bool operator==(const FMatrix& o) const;
  bool operator!=(const FMatrix& o) const { return !(*this == o); }

  /// Rows [r0, r0 + nr) and columns [c0, c0 + nc) as a new matrix.
  FMatrix block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const;

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<u64> data_;
};

FMatrix mat_mul(const FMatrix& a, const FMatrix& b);
FMatrix mat_add(const FMatrix& a, const FMatrix& b);
FMatrix mat_sub(const FMatrix& a, const FMatrix& b);
FMatrix mat_scale(u64 c, const FMatrix& m);
/// acc + c * m, elementwise.
FMatrix mat_axpy(const FMatrix& acc, u64 c, const FMatrix& m);
void mat_axpy_inplace(FMatrix& acc, u64 c, const FMatrix& m);
void mat_sub_inplace(FMatrix& acc, const FMatrix& m);

/// Entries iid uniform over [0, q), drawn in row-major order, one uniform_below(q) each.
FMatrix random_matrix(Rng& rng, const Field& f, std::size_t rows, std::size_t cols);

/// Splits a into m horizontal blocks (rows must be divisible by m).
std::vector<FMatrix> split_rows(const FMatrix& a, std::size_t m);
/// Splits b into k vertical blocks (cols must be divisible by k).
std::vector<FMatrix> split_cols(const FMatrix& b, std::size_t k);

}  // namespace rpm3
