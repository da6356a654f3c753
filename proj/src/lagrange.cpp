#include "rpm3/lagrange.hpp"

#include <algorithm>
#include <string>

#include "rpm3/error.hpp"

namespace rpm3 {

namespace {

void require_distinct(std::vector<u64> xs, Errc code, const char* what) {
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) fail(code, what);
}

// Inverts every entry with a single field inversion (prefix products).
void batch_invert(const Field& f, std::vector<u64>& v) {
  std::vector<u64> pre(v.size() + 1, 1);
  for (std::size_t i = 0; i < v.size(); ++i) pre[i + 1] = f.mul(pre[i], v[i]);
  u64 acc = f.inv(pre.back());
  for (std::size_t i = v.size(); i-- > 0;) {
    const u64 vi = v[i];
    v[i] = f.mul(acc, pre[i]);
    acc = f.mul(acc, vi);
  }
}

// Barycentric weights w_j = 1 / prod_{k != j} (x_j - x_k).
std::vector<u64> bary_weights(const Field& f, const std::vector<u64>& xs) {
  std::vector<u64> w(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    u64 den = 1;
    for (std::size_t k = 0; k < xs.size(); ++k)
      if (k != j) den = f.mul(den, f.sub(xs[j], xs[k]));
    w[j] = den;
  }
  batch_invert(f, w);
  return w;
}

// Encoding reuses a handful of node sets (one per payload count) for a whole run.
const std::vector<u64>& cached_weights(const Field& f, const std::vector<u64>& xs) {
  struct Entry {
    u64 mod;
    std::vector<u64> nodes, weights;
  };
  thread_local std::vector<Entry> cache;
  for (const Entry& e : cache)
    if (e.mod == f.modulus() && e.nodes == xs) return e.weights;
  if (cache.size() >= 16) cache.erase(cache.begin());
  cache.push_back(Entry{f.modulus(), xs, bary_weights(f, xs)});
  return cache.back().weights;
}

// Basis values at x given precomputed weights.
std::vector<u64> basis_from_weights(const Field& f, const std::vector<u64>& xs,
                                    const std::vector<u64>& w, u64 x) {
  std::vector<u64> out(xs.size(), 0);
  for (std::size_t j = 0; j < xs.size(); ++j)
    if (xs[j] == x) {
      out[j] = 1;
      return out;
    }
  u64 ell = 1;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    out[j] = f.sub(x, xs[j]);
    ell = f.mul(ell, out[j]);
  }
  batch_invert(f, out);
  for (std::size_t j = 0; j < xs.size(); ++j) out[j] = f.mul(ell, f.mul(w[j], out[j]));
  return out;
}

FMatrix combine(const Field& f, const std::vector<u64>& coef, const std::vector<const FMatrix*>& ms) {
  FMatrix acc(f, ms.front()->rows(), ms.front()->cols());
  for (std::size_t j = 0; j < ms.size(); ++j) mat_axpy_inplace(acc, coef[j], *ms[j]);
  return acc;
}

}  // namespace

EvalPoints EvalPoints::canonical(const Field& f, std::size_t d_max, std::size_t z, std::size_t n) {
  const std::size_t total = d_max + z + n;
  if (total >= f.modulus())
    fail(Errc::InvalidArgument, "field too small for " + std::to_string(total) + " distinct points");
  EvalPoints p;
  for (std::size_t i = 1; i <= d_max + z; ++i) p.alphas.push_back(i);
  for (std::size_t i = 1; i <= n; ++i) p.betas.push_back(d_max + z + i);
  return p;
}

void EvalPoints::validate(const Field& f) const {
  std::vector<u64> all = alphas;
  for (u64& a : all) a = f.reduce(a);
  require_distinct(all, Errc::DuplicateNode, "alpha nodes collide");
  std::vector<u64> bs = betas;
  for (u64& b : bs) b = f.reduce(b);
  require_distinct(bs, Errc::DuplicateAbscissa, "beta points collide");
  all.insert(all.end(), bs.begin(), bs.end());
  require_distinct(all, Errc::DuplicateNode, "a beta point coincides with an alpha node");
}

void PolyPair::validate() const {
  if (randoms_f.size() != z || randoms_g.size() != z)
    fail(Errc::InvalidArgument, "PolyPair needs exactly z masks per side");
  if (payload_f.size() != d || payload_g.size() != d)
    fail(Errc::InvalidArgument, "PolyPair needs exactly d payload blocks per side");
  if (z + d == 0) fail(Errc::InvalidArgument, "empty PolyPair");
  const FMatrix& fa = z ? randoms_f[0] : payload_f[0];
  const FMatrix& ga = z ? randoms_g[0] : payload_g[0];
  for (const auto* v : {&randoms_f, &payload_f})
    for (const FMatrix& m : *v)
      if (!m.same_shape(fa)) fail(Errc::DimensionMismatch, "f-side blocks differ in shape");
  for (const auto* v : {&randoms_g, &payload_g})
    for (const FMatrix& m : *v)
      if (!m.same_shape(ga)) fail(Errc::DimensionMismatch, "g-side blocks differ in shape");
}

std::vector<u64> lagrange_basis(const Field& f, const std::vector<u64>& nodes, u64 x) {
  require_distinct(nodes, Errc::DuplicateNode, "Lagrange nodes collide");
  return basis_from_weights(f, nodes, cached_weights(f, nodes), f.reduce(x));
}

std::pair<FMatrix, FMatrix> eval_pair(const PolyPair& p, const EvalPoints& pts, u64 x) {
  p.validate();
  const std::size_t nn = p.d + p.z;
  if (pts.alphas.size() < nn) fail(Errc::InvalidArgument, "not enough alpha nodes");
  const Field& f = p.z ? p.randoms_f[0].field() : p.payload_f[0].field();
  std::vector<u64> nodes(pts.alphas.begin(), pts.alphas.begin() + static_cast<long>(nn));
  const std::vector<u64> L = lagrange_basis(f, nodes, x);
  std::vector<const FMatrix*> fs, gs;
  fs.reserve(nn);
  gs.reserve(nn);
  for (std::size_t i = 0; i < p.z; ++i) {
    fs.push_back(&p.randoms_f[i]);
    gs.push_back(&p.randoms_g[i]);
  }
  for (std::size_t i = 0; i < p.d; ++i) {
    fs.push_back(&p.payload_f[i]);
    gs.push_back(&p.payload_g[i]);
  }
  return {combine(f, L, fs), combine(f, L, gs)};
}

std::vector<FMatrix> interpolate_at(const Field& f, const std::vector<Sample>& samples,
                                    std::size_t degree_bound, const std::vector<u64>& targets) {
  const std::size_t need = degree_bound + 1;
  if (samples.size() < need)
    fail(Errc::InsufficientSamples, "have " + std::to_string(samples.size()) + " samples, need " +
                                        std::to_string(need));
  std::vector<u64> all_x;
  for (const Sample& s : samples) all_x.push_back(f.reduce(s.x));
  require_distinct(all_x, Errc::DuplicateAbscissa, "sample abscissas collide");

  std::vector<u64> xs(all_x.begin(), all_x.begin() + static_cast<long>(need));
  std::vector<const FMatrix*> ys;
  ys.reserve(need);
  for (std::size_t i = 0; i < need; ++i) ys.push_back(&samples[i].y);
  const std::vector<u64> w = bary_weights(f, xs);

  for (std::size_t i = need; i < samples.size(); ++i) {
    const FMatrix check = combine(f, basis_from_weights(f, xs, w, all_x[i]), ys);
    if (check != samples[i].y)
      fail(Errc::InconsistentSamples, "sample " + std::to_string(i) + " disagrees with interpolant");
  }

  std::vector<FMatrix> out;
  out.reserve(targets.size());
  for (u64 t : targets) out.push_back(combine(f, basis_from_weights(f, xs, w, f.reduce(t)), ys));
  return out;
}

ProductDegree product_degree(std::size_t d, std::size_t z) {
  if (d < 1 || z < 1) fail(Errc::InvalidArgument, "product_degree needs d, z >= 1");
  return {2 * (d + z - 1), 2 * d + 2 * z - 1};
}

}  // namespace rpm3
