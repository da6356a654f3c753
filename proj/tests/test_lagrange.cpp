#include <doctest.h>

#include "oracles.hpp"
#include "rpm3/error.hpp"
#include "rpm3/lagrange.hpp"
#include "rpm3/rng.hpp"

using namespace rpm3;

namespace {

FMatrix scalar(const Field& f, u64 v) {
  FMatrix m(f, 1, 1);
  m.set(0, 0, v);
  return m;
}

}  // namespace

TEST_CASE("canonical points are disjoint and sized") {
  const Field f;
  const EvalPoints p = EvalPoints::canonical(f, 3, 2, 10);
  CHECK(p.alphas.size() == 5);
  CHECK(p.betas.size() == 10);
  CHECK(p.alphas.front() == 1);
  CHECK(p.betas.front() == 6);
  CHECK_NOTHROW(p.validate(f));
  EvalPoints bad = p;
  bad.betas[0] = bad.alphas[4];
  CHECK_THROWS_AS(bad.validate(f), Error);
  CHECK_THROWS_AS(EvalPoints::canonical(Field(7), 3, 2, 10), Error);
}

TEST_CASE("basis is the identity on its nodes and sums to one") {
  const Field f(101);
  const std::vector<u64> nodes{1, 2, 5, 9};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto b = lagrange_basis(f, nodes, nodes[i]);
    for (std::size_t j = 0; j < nodes.size(); ++j) CHECK(b[j] == (i == j ? 1u : 0u));
  }
  for (u64 x = 10; x < 30; ++x) {
    const auto b = lagrange_basis(f, nodes, x);
    u64 s = 0;
    for (u64 v : b) s = f.add(s, v);
    CHECK(s == 1);
  }
}

TEST_CASE("pair evaluation matches the Vandermonde-fitted polynomial") {
  const Field f(1000003);
  Rng rng(4);
  const std::size_t z = 2, d = 3;
  const EvalPoints pts = EvalPoints::canonical(f, d, z, 6);
  PolyPair p;
  p.z = z;
  p.d = d;
  std::vector<u64> fv;
  for (std::size_t i = 0; i < z; ++i) {
    p.randoms_f.push_back(random_matrix(rng, f, 1, 1));
    p.randoms_g.push_back(random_matrix(rng, f, 1, 1));
    fv.push_back(p.randoms_f.back().at(0, 0));
  }
  for (std::size_t i = 0; i < d; ++i) {
    p.payload_f.push_back(random_matrix(rng, f, 1, 1));
    p.payload_g.push_back(random_matrix(rng, f, 1, 1));
    fv.push_back(p.payload_f.back().at(0, 0));
  }
  const std::vector<u64> nodes(pts.alphas.begin(), pts.alphas.begin() + z + d);
  const auto coeffs = oracle::fit_poly(nodes, fv, f.modulus());
  for (u64 x : pts.betas) CHECK(eval_pair(p, pts, x).first.at(0, 0) == oracle::horner(coeffs, x, f.modulus()));
}

TEST_CASE("interpolation recovers a product polynomial at new targets") {
  const Field f;
  Rng rng(8);
  const std::size_t deg = 6;
  std::vector<u64> coeffs(deg + 1);
  for (auto& c : coeffs) c = rng.uniform_below(f.modulus());
  std::vector<Sample> samples;
  for (u64 x = 100; x < 100 + deg + 1; ++x) samples.push_back(Sample{x, scalar(f, oracle::horner(coeffs, x, f.modulus()))});
  const std::vector<u64> targets{1, 2, 3};
  const auto vals = interpolate_at(f, samples, deg, targets);
  for (std::size_t i = 0; i < targets.size(); ++i)
    CHECK(vals[i].at(0, 0) == oracle::horner(coeffs, targets[i], f.modulus()));
}

TEST_CASE("interpolation error paths") {
  const Field f(101);
  std::vector<Sample> s{{1, scalar(f, 1)}, {2, scalar(f, 2)}};
  CHECK_THROWS_AS(interpolate_at(f, s, 2, {5}), Error);
  s.push_back({2, scalar(f, 2)});
  try {
    interpolate_at(f, s, 2, {5});
    FAIL("expected DuplicateAbscissa");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DuplicateAbscissa);
  }
  // a line through (1,1),(2,2) with an extra point off the line
  std::vector<Sample> t{{1, scalar(f, 1)}, {2, scalar(f, 2)}, {3, scalar(f, 7)}};
  try {
    interpolate_at(f, t, 1, {5});
    FAIL("expected InconsistentSamples");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InconsistentSamples);
  }
}

TEST_CASE("product degree and point count") {
  CHECK(product_degree(1, 1).degree == 2);
  CHECK(product_degree(1, 1).points == 3);
  CHECK(product_degree(4, 3).points == 13);
  CHECK_THROWS_AS(product_degree(0, 1), Error);
}

TEST_CASE("f*g interpolated from 2d+2z-1 worker products gives the payload products") {
  const Field f;
  Rng rng(21);
  const std::size_t z = 3, d = 2;
  const EvalPoints pts = EvalPoints::canonical(f, d, z, 20);
  PolyPair p;
  p.z = z;
  p.d = d;
  for (std::size_t i = 0; i < z; ++i) {
    p.randoms_f.push_back(random_matrix(rng, f, 2, 3));
    p.randoms_g.push_back(random_matrix(rng, f, 3, 2));
  }
  for (std::size_t i = 0; i < d; ++i) {
    p.payload_f.push_back(random_matrix(rng, f, 2, 3));
    p.payload_g.push_back(random_matrix(rng, f, 3, 2));
  }
  const ProductDegree pd = product_degree(d, z);
  std::vector<Sample> samples;
  for (std::size_t w = 0; w < pd.points; ++w) {
    auto [a, b] = eval_pair(p, pts, pts.betas[w]);
    samples.push_back(Sample{pts.betas[w], mat_mul(a, b)});
  }
  const std::vector<u64> targets(pts.alphas.begin(), pts.alphas.begin() + z + d);
  const auto vals = interpolate_at(f, samples, pd.degree, targets);
  for (std::size_t i = 0; i < z; ++i) CHECK(vals[i] == mat_mul(p.randoms_f[i], p.randoms_g[i]));
  for (std::size_t i = 0; i < d; ++i) CHECK(vals[z + i] == mat_mul(p.payload_f[i], p.payload_g[i]));
}
