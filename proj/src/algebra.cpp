#include "rpm3/algebra.hpp"

#include <algorithm>
#include <string>

#include "rpm3/error.hpp"

namespace rpm3 {

bool is_prime(u64 q) {
  if (q < 2) return false;
  if (q % 2 == 0) return q == 2;
  for (u64 d = 3; d * d <= q; d += 2)
    if (q % d == 0) return false;
  return true;
}

Field::Field(u64 q) : q_(q) {
  if (q >= (u64{1} << 32)) fail(Errc::InvalidArgument, "modulus must be below 2^32");
  if (!is_prime(q)) fail(Errc::InvalidArgument, "modulus " + std::to_string(q) + " is not prime");
}

u64 Field::from_int(long long v) const {
  const long long q = static_cast<long long>(q_);
  long long r = v % q;
  if (r < 0) r += q;
  return static_cast<u64>(r);
}

u64 Field::pow(u64 a, u64 e) const {
  u64 result = 1 % q_;
  a %= q_;
  while (e) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

u64 Field::inv(u64 a) const {
  a %= q_;
  if (a == 0) fail(Errc::ZeroInverse, "inverse of 0");
  // Extended Euclid on signed 64-bit values; q < 2^32 keeps everything in range.
  long long r0 = static_cast<long long>(q_), r1 = static_cast<long long>(a);
  long long t0 = 0, t1 = 1;
  while (r1 != 0) {
    const long long qt = r0 / r1;
    long long tmp = r0 - qt * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - qt * t1;
    t0 = t1;
    t1 = tmp;
  }
  return from_int(t0);
}

u64 field_inv(const Field& f, u64 a) { return f.inv(a); }

FMatrix::FMatrix(const Field& f, std::size_t rows, std::size_t cols)
    : field_(f), rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) fail(Errc::InvalidArgument, "matrix dimensions must be positive");
  data_.assign(rows * cols, 0);
}

FMatrix::FMatrix(const Field& f, std::initializer_list<std::initializer_list<long long>> rows)
    : field_(f), rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0) fail(Errc::InvalidArgument, "matrix dimensions must be positive");
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(Errc::DimensionMismatch, "ragged matrix literal");
    for (long long v : r) data_.push_back(f.from_int(v));
  }
}

FMatrix FMatrix::identity(const Field& f, std::size_t n) {
  FMatrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

bool FMatrix::is_zero() const {
  for (u64 v : data_)
    if (v) return false;
  return true;
}

bool FMatrix::operator==(const FMatrix& o) const {
  return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

FMatrix FMatrix::block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) fail(Errc::IndexOutOfRange, "block outside matrix");
  FMatrix out(field_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) out.data_[i * nc + j] = data_[(r0 + i) * cols_ + c0 + j];
  return out;
}

namespace {
void check_same(const FMatrix& a, const FMatrix& b) {
  if (!(a.field() == b.field())) fail(Errc::FieldMismatch, "operands over different fields");
  if (!a.same_shape(b)) fail(Errc::DimensionMismatch, "operand shapes differ");
}
}  // namespace

FMatrix mat_mul(const FMatrix& a, const FMatrix& b) {
  if (!(a.field() == b.field())) fail(Errc::FieldMismatch, "operands over different fields");
  if (a.cols() != b.rows()) fail(Errc::DimensionMismatch, "inner dimensions differ");
  const Field& f = a.field();
  const u64 q = f.modulus();
  const std::size_t n = a.rows(), p = a.cols(), r = b.cols();
  FMatrix c(f, n, r);
  std::vector<unsigned __int128> acc(r);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t l = 0; l < p; ++l) {
      const u64 av = a.at(i, l);
      if (!av) continue;
      const u64* brow = b.data().data() + l * r;
      for (std::size_t j = 0; j < r; ++j) acc[j] += static_cast<unsigned __int128>(av * brow[j]);
    }
    for (std::size_t j = 0; j < r; ++j) c.data()[i * r + j] = static_cast<u64>(acc[j] % q);
  }
  return c;
}

FMatrix mat_add(const FMatrix& a, const FMatrix& b) {
  check_same(a, b);
  FMatrix c = a;
  const Field& f = a.field();
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] = f.add(c.data()[i], b.data()[i]);
  return c;
}

FMatrix mat_sub(const FMatrix& a, const FMatrix& b) {
  FMatrix c = a;
  mat_sub_inplace(c, b);
  return c;
}

void mat_sub_inplace(FMatrix& acc, const FMatrix& m) {
  check_same(acc, m);
  const Field& f = acc.field();
  for (std::size_t i = 0; i < acc.data().size(); ++i)
    acc.data()[i] = f.sub(acc.data()[i], m.data()[i]);
}

FMatrix mat_scale(u64 c, const FMatrix& m) {
  FMatrix out = m;
  const Field& f = m.field();
  c = f.reduce(c);
  for (u64& v : out.data()) v = f.mul(v, c);
  return out;
}

void mat_axpy_inplace(FMatrix& acc, u64 c, const FMatrix& m) {
  check_same(acc, m);
  const Field& f = acc.field();
  c = f.reduce(c);
  if (c == 0) return;
  for (std::size_t i = 0; i < acc.data().size(); ++i)
    acc.data()[i] = f.add(acc.data()[i], f.mul(c, m.data()[i]));
}

FMatrix mat_axpy(const FMatrix& acc, u64 c, const FMatrix& m) {
  FMatrix out = acc;
  mat_axpy_inplace(out, c, m);
  return out;
}

FMatrix random_matrix(Rng& rng, const Field& f, std::size_t rows, std::size_t cols) {
  FMatrix m(f, rows, cols);
  for (u64& v : m.data()) v = rng.uniform_below(f.modulus());
  return m;
}

std::vector<FMatrix> split_rows(const FMatrix& a, std::size_t m) {
  if (m == 0 || a.rows() % m) fail(Errc::DimensionMismatch, "rows not divisible by m");
  const std::size_t h = a.rows() / m;
  std::vector<FMatrix> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(a.block(i * h, h, 0, a.cols()));
  return out;
}

std::vector<FMatrix> split_cols(const FMatrix& b, std::size_t k) {
  if (k == 0 || b.cols() % k) fail(Errc::DimensionMismatch, "cols not divisible by k");
  const std::size_t w = b.cols() / k;
  std::vector<FMatrix> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) out.push_back(b.block(0, b.rows(), j * w, w));
  return out;
}

}  // namespace rpm3
