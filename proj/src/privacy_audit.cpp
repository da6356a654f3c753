#include "rpm3/privacy_audit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rpm3/error.hpp"

namespace rpm3 {

namespace {

constexpr std::uint64_t kMaxStates = 10'000'000;

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > kMaxStates * 1000 / std::max<std::uint64_t>(b, 1)) return kMaxStates * 1000;
    r *= b;
  }
  return r;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t z) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(z);
  for (std::size_t i = 0; i < z; ++i) cur[i] = i;
  if (z > n) return out;
  for (;;) {
    out.push_back(cur);
    std::size_t i = z;
    while (i > 0 && cur[i - 1] == n - z + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < z; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Basis values at every worker point: basis[w][i] = L_i(beta_w) over the alphas.
std::vector<std::vector<u64>> worker_bases(const TinyInstance& inst, const Field& f) {
  std::vector<std::vector<u64>> out;
  for (u64 b : inst.betas) out.push_back(lagrange_basis(f, inst.alphas, b));
  return out;
}

// Enumerates all (R, S) in F_q^z x F_q^z; digit i of the index is R_i, digit z+i is S_i.
template <class Visit>
void enumerate_masks(u64 q, std::size_t z, Visit&& visit) {
  std::vector<u64> r(z, 0), s(z, 0);
  const std::uint64_t total = ipow(q, 2 * z);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t v = idx;
    for (std::size_t i = 0; i < z; ++i, v /= q) r[i] = v % q;
    for (std::size_t i = 0; i < z; ++i, v /= q) s[i] = v % q;
    visit(r, s);
  }
}

u64 share_value(const Field& f, const std::vector<u64>& basis, const std::vector<u64>& masks, u64 payload) {
  u64 acc = f.mul(basis.back(), payload);
  for (std::size_t i = 0; i < masks.size(); ++i) acc = f.add(acc, f.mul(basis[i], masks[i]));
  return acc;
}

}  // namespace

TinyInstance TinyInstance::standard(u64 q, std::size_t n, std::size_t z) {
  if (!is_prime(q)) fail(Errc::InvalidArgument, "q must be prime");
  if (z < 1 || n < 1) fail(Errc::InvalidArgument, "need n, z >= 1");
  if (z > n) fail(Errc::InvalidArgument, "z must not exceed n");
  if (z + 1 >= q) fail(Errc::InvalidArgument, "field too small for the nodes");
  TinyInstance t;
  t.q = q;
  t.n = n;
  t.z = z;
  for (u64 i = 1; i <= z + 1; ++i) t.alphas.push_back(i);
  for (u64 x = z + 2; x < q + 1 && t.betas.size() < n; ++x) t.betas.push_back(x % q);
  for (std::size_t i = 0; i < z && t.betas.size() < n; ++i) t.betas.push_back(t.alphas[i]);
  if (t.betas.size() < n) fail(Errc::InvalidArgument, "field too small for n workers");
  t.validate();
  return t;
}

TinyInstance TinyInstance::with_leaky_worker() const {
  TinyInstance t = *this;
  t.betas.at(0) = alphas.back();
  return t;
}

std::uint64_t TinyInstance::states() const { return ipow(q, 2 * z); }

bool TinyInstance::disjoint() const {
  for (u64 b : betas)
    if (std::find(alphas.begin(), alphas.end(), b) != alphas.end()) return false;
  return true;
}

void TinyInstance::validate() const {
  if (states() > kMaxStates)
    fail(Errc::InstanceTooLarge, std::to_string(q) + "^" + std::to_string(2 * z) + " mask draws exceed 10^7");
  if (alphas.size() != z + 1) fail(Errc::InvalidArgument, "need z mask nodes and one payload node");
  if (betas.size() != n) fail(Errc::InvalidArgument, "need one point per worker");
  std::vector<u64> a = alphas, b = betas;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (std::adjacent_find(a.begin(), a.end()) != a.end() || std::adjacent_find(b.begin(), b.end()) != b.end())
    fail(Errc::DuplicateNode, "evaluation points repeat");
  for (u64 x : a)
    if (x >= q) fail(Errc::InvalidArgument, "node outside the field");
  for (u64 x : b)
    if (x >= q) fail(Errc::InvalidArgument, "point outside the field");
}

std::uint64_t ShareHistogram::draws() const {
  std::uint64_t s = 0;
  for (std::uint64_t c : counts) s += c;
  return s;
}

bool ShareHistogram::uniform() const {
  return !counts.empty() && std::all_of(counts.begin(), counts.end(), [&](std::uint64_t c) { return c == counts[0]; });
}

std::uint64_t ShareHistogram::checksum() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint64_t c : counts)
    for (int i = 0; i < 8; ++i) {
      h ^= (c >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  return h;
}

ShareHistogram share_distribution(const TinyInstance& inst, u64 a, u64 b, const std::vector<std::size_t>& zset) {
  inst.validate();
  if (zset.size() != inst.z) fail(Errc::InvalidArgument, "subset must have z workers");
  for (std::size_t w : zset)
    if (w >= inst.n) fail(Errc::IndexOutOfRange, "worker outside the instance");
  const Field f(inst.q);
  const auto bases = worker_bases(inst, f);
  ShareHistogram h;
  h.q = inst.q;
  h.width = 2 * inst.z;
  h.counts.assign(ipow(inst.q, h.width), 0);
  enumerate_masks(inst.q, inst.z, [&](const std::vector<u64>& r, const std::vector<u64>& s) {
    std::uint64_t key = 0;
    for (std::size_t w : zset) {
      key = key * inst.q + share_value(f, bases[w], r, a);
      key = key * inst.q + share_value(f, bases[w], s, b);
    }
    ++h.counts[key];
  });
  return h;
}

bool AuditReport::pass() const {
  return cross_round && !subsets.empty() &&
         std::all_of(subsets.begin(), subsets.end(), [](const SubsetVerdict& v) { return v.pass() && v.recovered; });
}

std::vector<FMatrix> recover_randomness(const Field& f, const std::vector<u64>& alphas, std::size_t z,
                                        const std::vector<FMatrix>& payload, const std::vector<Sample>& shares) {
  if (z < 1 || alphas.size() != z + payload.size() || payload.empty())
    fail(Errc::InvalidArgument, "need z mask nodes plus one node per payload block");
  if (shares.size() < z)
    fail(Errc::InsufficientShares, std::to_string(shares.size()) + " shares for z=" + std::to_string(z));
  std::vector<Sample> quotient;
  for (const Sample& s : shares) {
    const std::vector<u64> basis = lagrange_basis(f, alphas, s.x);
    FMatrix y = s.y;
    for (std::size_t j = 0; j < payload.size(); ++j) mat_sub_inplace(y, mat_scale(basis[z + j], payload[j]));
    u64 w = 1;
    for (std::size_t j = z; j < alphas.size(); ++j) w = f.mul(w, f.sub(s.x, alphas[j]));
    if (w == 0) fail(Errc::InvalidArgument, "share taken at a payload node");
    quotient.push_back(Sample{s.x, mat_scale(f.inv(w), y)});
  }
  std::vector<u64> targets(alphas.begin(), alphas.begin() + static_cast<long>(z));
  std::vector<FMatrix> vals = interpolate_at(f, quotient, z - 1, targets);
  for (std::size_t i = 0; i < z; ++i) {
    u64 w = 1;
    for (std::size_t j = z; j < alphas.size(); ++j) w = f.mul(w, f.sub(alphas[i], alphas[j]));
    vals[i] = mat_scale(w, vals[i]);
  }
  return vals;
}

AuditReport audit(const TinyInstance& inst, bool check_cross_round) {
  inst.validate();
  const Field f(inst.q);
  const u64 q = inst.q;
  const auto bases = worker_bases(inst, f);
  AuditReport rep;
  rep.inst = inst;
  const double grid = static_cast<double>(q * q);

  for (const auto& zset : subsets(inst.n, inst.z)) {
    SubsetVerdict v;
    v.workers = zset;
    std::vector<ShareHistogram> hs;
    for (u64 a = 0; a < q; ++a)
      for (u64 b = 0; b < q; ++b) hs.push_back(share_distribution(inst, a, b, zset));
    v.uniform = std::all_of(hs.begin(), hs.end(), [](const ShareHistogram& h) { return h.uniform(); });
    v.independent = std::all_of(hs.begin(), hs.end(), [&](const ShareHistogram& h) { return h.counts == hs[0].counts; });
    v.checksum = hs[0].checksum();

    const double draws = static_cast<double>(hs[0].draws());
    double mi = 0;
    for (std::size_t key = 0; key < hs[0].counts.size(); ++key) {
      std::uint64_t total = 0;
      for (const auto& h : hs) total += h.counts[key];
      for (const auto& h : hs) {
        if (h.counts[key] == 0) continue;
        const double p = static_cast<double>(h.counts[key]) / draws;
        // p(s|ab) / p(s) as a ratio of integers, exactly 1 when the histograms agree
        const double ratio = static_cast<double>(h.counts[key] * hs.size()) / static_cast<double>(total);
        mi += p / grid * std::log2(ratio);
      }
    }
    v.mutual_information = std::max(0.0, mi);

    // recovery from the shares of one fixed draw: R_i = i+1, A = 2
    v.recovered = true;
    std::vector<u64> masks(inst.z);
    for (std::size_t i = 0; i < inst.z; ++i) masks[i] = (i + 1) % q;
    const u64 a = 2 % q;
    std::vector<Sample> shares;
    bool at_payload = false;
    for (std::size_t w : zset) {
      if (inst.betas[w] == inst.alphas.back()) at_payload = true;
      FMatrix y(f, 1, 1);
      y.set(0, 0, share_value(f, bases[w], masks, a));
      shares.push_back(Sample{inst.betas[w], y});
    }
    if (at_payload) {
      v.recovered = false;
    } else {
      FMatrix am(f, 1, 1);
      am.set(0, 0, a);
      const auto rec = recover_randomness(f, inst.alphas, inst.z, {am}, shares);
      for (std::size_t i = 0; i < inst.z; ++i) v.recovered = v.recovered && rec[i].at(0, 0) == masks[i];
    }
    rep.subsets.push_back(std::move(v));
  }

  rep.cross_round = true;
  if (check_cross_round) {
    // two independent rounds, same worker set: the joint tuple must be uniform over F_q^(4z)
    if (ipow(q, 4 * inst.z) > kMaxStates) fail(Errc::InstanceTooLarge, "two-round enumeration exceeds 10^7");
    const u64 a = 1 % q, b = 2 % q, a2 = 3 % q, b2 = 4 % q;
    for (const auto& zset : subsets(inst.n, inst.z)) {
      const std::uint64_t half = ipow(q, 2 * inst.z);
      std::vector<std::uint64_t> counts(half * half, 0);
      std::vector<std::uint64_t> first;
      enumerate_masks(q, inst.z, [&](const std::vector<u64>& r, const std::vector<u64>& s) {
        std::uint64_t key = 0;
        for (std::size_t w : zset) {
          key = key * q + share_value(f, bases[w], r, a);
          key = key * q + share_value(f, bases[w], s, b);
        }
        first.push_back(key);
      });
      std::size_t idx = 0;
      std::vector<std::uint64_t> second(first.size());
      enumerate_masks(q, inst.z, [&](const std::vector<u64>& r, const std::vector<u64>& s) {
        std::uint64_t key = 0;
        for (std::size_t w : zset) {
          key = key * q + share_value(f, bases[w], r, a2);
          key = key * q + share_value(f, bases[w], s, b2);
        }
        second[idx++] = key;
      });
      for (std::uint64_t k1 : first)
        for (std::uint64_t k2 : second) ++counts[k1 * half + k2];
      if (!std::all_of(counts.begin(), counts.end(), [&](std::uint64_t c) { return c == counts[0]; })) {
        rep.cross_round = false;
        break;
      }
    }
  }
  return rep;
}

nlohmann::json to_json(const AuditReport& r) {
  nlohmann::json j;
  j["q"] = r.inst.q;
  j["n"] = r.inst.n;
  j["z"] = r.inst.z;
  j["alphas"] = r.inst.alphas;
  j["betas"] = r.inst.betas;
  j["disjoint_layout"] = r.inst.disjoint();
  j["mask_draws"] = r.inst.states();
  j["cross_round_independent"] = r.cross_round;
  j["pass"] = r.pass();
  auto& arr = j["subsets"] = nlohmann::json::array();
  for (const SubsetVerdict& v : r.subsets) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v.checksum));
    arr.push_back({{"workers", v.workers},
                   {"uniform", v.uniform},
                   {"independent", v.independent},
                   {"mutual_information_bits", v.mutual_information},
                   {"histogram_checksum", buf},
                   {"masks_recovered", v.recovered},
                   {"pass", v.pass()}});
  }
  return j;
}

}  // namespace rpm3
