#include "rpm3/fountain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rpm3/error.hpp"

namespace rpm3 {

RobustSoliton::RobustSoliton(std::size_t K, SolitonParams params) {
  if (K == 0) fail(Errc::InvalidArgument, "soliton over empty support");
  if (!(params.c > 0) || !(params.delta > 0 && params.delta < 1))
    fail(Errc::InvalidArgument, "soliton needs c > 0 and 0 < delta < 1");
  const double Kd = static_cast<double>(K);
  const double R = params.c * std::log(Kd / params.delta) * std::sqrt(Kd);
  std::vector<double> w(K + 1, 0.0);
  w[1] = 1.0 / Kd;
  for (std::size_t d = 2; d <= K; ++d) w[d] = 1.0 / (static_cast<double>(d) * (d - 1));
  if (R > 0) {
    const auto spike = static_cast<std::size_t>(std::floor(Kd / R));
    for (std::size_t d = 1; d <= K && d < spike; ++d) w[d] += R / (static_cast<double>(d) * Kd);
    if (spike >= 1 && spike <= K) w[spike] += R * std::log(R / params.delta) / Kd;
  }
  for (double& x : w) x = std::max(x, 0.0);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  pmf_.resize(K + 1);
  cdf_.resize(K + 1);
  double run = 0;
  for (std::size_t d = 0; d <= K; ++d) {
    pmf_[d] = w[d] / total;
    run += pmf_[d];
    cdf_[d] = run;
  }
  cdf_[K] = 1.0;
}

std::size_t RobustSoliton::sample(Rng& rng) const {
  const double u = rng.uniform01();
  auto it = std::upper_bound(cdf_.begin() + 1, cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::size_t>(it - cdf_.begin());
}

namespace {

std::vector<std::size_t> choose_subset(Rng& rng, std::size_t universe, std::size_t size) {
  std::vector<std::size_t> pool(universe);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(universe - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

FountainSpec sample_spec(Rng& rng, std::size_t m, std::size_t k, const RobustSoliton& dist) {
  if (m == 0 || k == 0) fail(Errc::InvalidArgument, "grid dimensions must be positive");
  if (dist.K() != m * k) fail(Errc::InvalidArgument, "soliton support must equal m*k");
  std::vector<std::size_t> divisors;
  for (;;) {
    const std::size_t D = dist.sample(rng);
    divisors.clear();
    for (std::size_t a = 1; a <= std::min(m, D); ++a)
      if (D % a == 0 && D / a <= k) divisors.push_back(a);
    if (divisors.empty()) continue;
    const std::size_t da = divisors[rng.uniform_below(divisors.size())];
    FountainSpec spec;
    spec.sa = choose_subset(rng, m, da);
    spec.sb = choose_subset(rng, k, D / da);
    return spec;
  }
}

std::pair<FMatrix, FMatrix> encode_blocks(const FountainSpec& spec, const std::vector<FMatrix>& ablocks,
                                          const std::vector<FMatrix>& bblocks) {
  if (spec.sa.empty() || spec.sb.empty()) fail(Errc::InvalidArgument, "empty index set");
  for (std::size_t i : spec.sa)
    if (i >= ablocks.size()) fail(Errc::IndexOutOfRange, "A index " + std::to_string(i));
  for (std::size_t j : spec.sb)
    if (j >= bblocks.size()) fail(Errc::IndexOutOfRange, "B index " + std::to_string(j));
  FMatrix a = ablocks[spec.sa[0]];
  for (std::size_t t = 1; t < spec.sa.size(); ++t) a = mat_add(a, ablocks[spec.sa[t]]);
  FMatrix b = bblocks[spec.sb[0]];
  for (std::size_t t = 1; t < spec.sb.size(); ++t) b = mat_add(b, bblocks[spec.sb[t]]);
  return {std::move(a), std::move(b)};
}

DecodedGrid::DecodedGrid(std::size_t m, std::size_t k)
    : m_(m), k_(k), cells_(m * k), watchers_(m * k) {
  if (m == 0 || k == 0) fail(Errc::InvalidArgument, "grid dimensions must be positive");
}

std::size_t DecodedGrid::pending() const {
  return static_cast<std::size_t>(
      std::count_if(packets_.begin(), packets_.end(), [](const Pending& p) { return p.alive; }));
}

void DecodedGrid::peel(const FountainSpec& spec, FMatrix value) {
  std::vector<std::size_t> unknown;
  for (std::size_t i : spec.sa)
    for (std::size_t j : spec.sb) {
      if (i >= m_ || j >= k_) fail(Errc::IndexOutOfRange, "packet outside grid");
      const std::size_t c = i * k_ + j;
      if (cells_[c]) mat_sub_inplace(value, *cells_[c]);
      else unknown.push_back(c);
    }
  if (unknown.empty()) {
    if (!value.is_zero()) fail(Errc::InconsistentPacket, "fully reduced packet has nonzero residual");
    return;
  }
  if (unknown.size() == 1) {
    settle(unknown[0], std::move(value));
    return;
  }
  const std::size_t id = packets_.size();
  for (std::size_t c : unknown) watchers_[c].push_back(id);
  packets_.push_back(Pending{std::move(unknown), std::move(value), true});
}

void DecodedGrid::settle(std::size_t cell, FMatrix value) {
  std::vector<std::pair<std::size_t, FMatrix>> stack;
  stack.emplace_back(cell, std::move(value));
  while (!stack.empty()) {
    auto [c, v] = std::move(stack.back());
    stack.pop_back();
    if (cells_[c]) {
      if (*cells_[c] != v) fail(Errc::InconsistentPacket, "cell resolved to two different values");
      continue;
    }
    cells_[c] = v;
    ++resolved_;
    for (std::size_t id : watchers_[c]) {
      Pending& p = packets_[id];
      if (!p.alive) continue;
      mat_sub_inplace(p.residual, v);
      p.unknown.erase(std::find(p.unknown.begin(), p.unknown.end(), c));
      if (p.unknown.size() == 1) {
        p.alive = false;
        stack.emplace_back(p.unknown[0], std::move(p.residual));
      } else if (p.unknown.empty()) {
        p.alive = false;
        if (!p.residual.is_zero())
          fail(Errc::InconsistentPacket, "fully reduced packet has nonzero residual");
      }
    }
    watchers_[c].clear();
    watchers_[c].shrink_to_fit();
  }
}

FMatrix DecodedGrid::assemble() const {
  if (!complete()) fail(Errc::InvalidArgument, "grid not fully decoded");
  const FMatrix& c00 = *cells_[0];
  const std::size_t h = c00.rows(), w = c00.cols();
  FMatrix out(c00.field(), h * m_, w * k_);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < k_; ++j) {
      const FMatrix& blk = *cells_[i * k_ + j];
      for (std::size_t r = 0; r < h; ++r)
        for (std::size_t s = 0; s < w; ++s) out.data()[(i * h + r) * (w * k_) + j * w + s] = blk.at(r, s);
    }
  return out;
}

bool ge_solvable(const std::vector<FountainSpec>& specs, std::size_t m, std::size_t k) {
  const std::size_t n = m * k;
  if (specs.size() < n) return false;
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(specs.size());
  for (const FountainSpec& s : specs) {
    std::vector<std::uint64_t> r(words, 0);
    for (std::size_t i : s.sa)
      for (std::size_t j : s.sb) {
        const std::size_t c = i * k + j;
        if (i >= m || j >= k) return false;
        r[c / 64] ^= std::uint64_t{1} << (c % 64);
      }
    rows.push_back(std::move(r));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    const std::size_t w = col / 64;
    const std::uint64_t bit = std::uint64_t{1} << (col % 64);
    std::size_t piv = rank;
    while (piv < rows.size() && !(rows[piv][w] & bit)) ++piv;
    if (piv == rows.size()) return false;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && (rows[r][w] & bit))
        for (std::size_t x = 0; x < words; ++x) rows[r][x] ^= rows[rank][x];
    ++rank;
  }
  return rank == n;
}

}  // namespace rpm3
