#include "rpm3/protocol.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "rpm3/error.hpp"

namespace rpm3 {

std::size_t first_cluster_payload(std::size_t n1, std::size_t z) {
  if (n1 + 1 < 2 * z + 2) return 0;
  return (n1 + 1 - 2 * z) / 2;
}

std::size_t later_cluster_payload(std::size_t nu, std::size_t z) {
  if (nu + 1 < z + 2) return 0;
  return (nu + 1 - z) / 2;
}

std::size_t ClusterPlan::n() const { return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}); }

std::size_t ClusterPlan::needed(std::size_t u) const {
  if (u >= d.size()) fail(Errc::PlanViolation, "unknown cluster");
  return u == 0 ? 2 * d[0] + 2 * z - 1 : 2 * d[u] + z - 1;
}

ClusterPlan ClusterPlan::from_sizes(std::vector<std::size_t> sizes, std::size_t z) {
  ClusterPlan p;
  p.z = z;
  p.sizes = std::move(sizes);
  for (std::size_t u = 0; u < p.sizes.size(); ++u)
    p.d.push_back(u == 0 ? first_cluster_payload(p.sizes[0], z) : later_cluster_payload(p.sizes[u], z));
  p.membership.assign(p.n(), kUnassigned);
  p.validate();
  return p;
}

void ClusterPlan::validate() const {
  if (z < 1) fail(Errc::InvalidArgument, "z must be at least 1");
  if (sizes.empty()) fail(Errc::TooFewWorkers, "plan has no clusters");
  if (d.size() != sizes.size()) fail(Errc::PlanViolation, "payload counts do not match clusters");
  for (std::size_t u = 0; u < sizes.size(); ++u) {
    if (d[u] < 1)
      fail(Errc::TooFewWorkers, "cluster " + std::to_string(u + 1) + " of size " + std::to_string(sizes[u]) +
                                    " has no payload at z=" + std::to_string(z));
    if (needed(u) > sizes[u]) fail(Errc::PlanViolation, "cluster needs more points than workers");
  }
}

ClusterPlan single_cluster_plan(std::size_t n, std::size_t z) { return ClusterPlan::from_sizes({n}, z); }

std::vector<std::size_t> fit_cluster_sizes(const std::vector<std::size_t>& sizes, std::size_t z) {
  std::vector<std::size_t> out;
  std::size_t acc = 0;
  for (std::size_t s : sizes) {
    acc += s;
    const std::size_t thr = out.empty() ? 2 * z + 1 : z + 1;
    if (acc >= thr) {
      out.push_back(acc);
      acc = 0;
    }
  }
  if (out.empty())
    fail(Errc::TooFewWorkers, "at least " + std::to_string(2 * z + 1) + " workers needed for z=" + std::to_string(z));
  out.back() += acc;
  return out;
}

ClusterPlan cluster_workers(const std::vector<Completion>& completions, double delta, std::size_t z,
                            std::size_t first_min) {
  if (z < 1) fail(Errc::InvalidArgument, "z must be at least 1");
  if (delta < 0) fail(Errc::InvalidArgument, "delta must be non-negative");
  for (std::size_t i = 1; i < completions.size(); ++i)
    if (completions[i].time < completions[i - 1].time)
      fail(Errc::InvalidArgument, "completions must be sorted by time");
  const std::size_t n = completions.size();
  const std::size_t thr1 = first_min ? first_min : 2 * z - 1;
  if (n < 2 * z - 1 || n < thr1) fail(Errc::TooFewWorkers, "too few workers for z=" + std::to_string(z));

  std::vector<std::size_t> sizes;
  std::size_t idx = 0;
  for (;;) {
    const std::size_t thr = sizes.empty() ? thr1 : z + 1;
    if (n - idx < thr) break;
    const double start = completions[idx].time;
    double window = delta;
    auto count_in = [&](double w) {
      std::size_t c = 0;
      while (idx + c < n && completions[idx + c].time - start <= w) ++c;
      return c;
    };
    std::size_t cnt = count_in(window);
    while (cnt < thr) {
      window = window > 0 ? window * 1.5 : completions[idx + thr - 1].time - start;
      cnt = count_in(window);
    }
    sizes.push_back(cnt);
    idx += cnt;
  }
  sizes.back() += n - idx;

  ClusterPlan p;
  p.z = z;
  p.sizes = sizes;
  for (std::size_t u = 0; u < sizes.size(); ++u)
    p.d.push_back(u == 0 ? first_cluster_payload(sizes[0], z) : later_cluster_payload(sizes[u], z));
  p.validate();
  std::size_t max_worker = 0;
  for (const Completion& c : completions) max_worker = std::max(max_worker, c.worker);
  p.membership.assign(std::max(n, max_worker + 1), kUnassigned);
  std::size_t pos = 0;
  for (std::size_t u = 0; u < sizes.size(); ++u)
    for (std::size_t i = 0; i < sizes[u]; ++i) p.membership[completions[pos++].worker] = u;
  return p;
}

namespace {

void ensure_created(RoundState& st, const ClusterPlan& plan, std::size_t u, const EncodeContext& ctx,
                    Rng& rng) {
  auto& cr = st.clusters.at(u);
  if (cr.created) return;
  if (st.R.empty()) {
    for (std::size_t i = 0; i < ctx.z; ++i) st.R.push_back(random_matrix(rng, ctx.field, ctx.block_rows, ctx.inner));
    for (std::size_t i = 0; i < ctx.z; ++i) st.S.push_back(random_matrix(rng, ctx.field, ctx.inner, ctx.block_cols));
  }
  cr.poly.z = ctx.z;
  cr.poly.d = plan.d[u];
  cr.poly.randoms_f = st.R;
  cr.poly.randoms_g = st.S;
  for (std::size_t kappa = 0; kappa < plan.d[u]; ++kappa) {
    FountainSpec spec = sample_spec(rng, ctx.m, ctx.k, *ctx.soliton);
    auto [a, b] = encode_blocks(spec, *ctx.ablocks, *ctx.bblocks);
    cr.poly.payload_f.push_back(std::move(a));
    cr.poly.payload_g.push_back(std::move(b));
    cr.specs.push_back(std::move(spec));
  }
  cr.created = true;
}

}  // namespace

TaskShare encode_task(RoundState& st, const ClusterPlan& plan, const EvalPoints& pts, std::size_t worker,
                      const EncodeContext& ctx, Rng& rng) {
  if (worker >= plan.membership.size() || plan.membership[worker] == kUnassigned)
    fail(Errc::PlanViolation, "worker " + std::to_string(worker) + " has no cluster");
  if (worker >= pts.betas.size()) fail(Errc::PlanViolation, "worker has no evaluation point");
  const std::size_t u = plan.membership[worker];
  ensure_created(st, plan, u, ctx, rng);
  const u64 x = pts.betas[worker];
  auto [fs, gs] = eval_pair(st.clusters[u].poly, pts, x);
  return TaskShare{worker, st.t, u, x, std::move(fs), std::move(gs)};
}

std::vector<Packet> interpolate_cluster(RoundState& st, const ClusterPlan& plan, const EvalPoints& pts,
                                        std::size_t u, const std::vector<Sample>& responses) {
  auto& cr = st.clusters.at(u);
  if (!cr.created) fail(Errc::PlanViolation, "cluster round was never encoded");
  const std::size_t z = plan.z, d = plan.d[u];
  const ProductDegree pd = product_degree(d, z);
  const Field& f = cr.poly.randoms_f.empty() ? cr.poly.payload_f[0].field() : cr.poly.randoms_f[0].field();

  std::vector<Sample> samples;
  std::vector<u64> targets;
  if (u == 0) {
    samples = responses;
    for (std::size_t i = 0; i < z + d; ++i) targets.push_back(pts.alphas[i]);
  } else {
    if (!st.shared) fail(Errc::MissingSharedEvals, "round " + std::to_string(st.t) + " has no shared evaluations yet");
    for (std::size_t i = 0; i < z; ++i) samples.push_back(Sample{pts.alphas[i], (*st.shared)[i]});
    samples.insert(samples.end(), responses.begin(), responses.end());
    for (std::size_t i = 0; i < d; ++i) targets.push_back(pts.alphas[z + i]);
  }
  if (samples.size() < pd.points)
    fail(Errc::InsufficientSamples, "cluster " + std::to_string(u + 1) + " has " + std::to_string(samples.size()) +
                                        " of " + std::to_string(pd.points) + " points");
  std::vector<FMatrix> vals = interpolate_at(f, samples, pd.degree, targets);

  std::vector<Packet> out;
  std::size_t off = 0;
  if (u == 0) {
    st.shared = std::vector<FMatrix>(vals.begin(), vals.begin() + static_cast<long>(z));
    off = z;
  }
  for (std::size_t kappa = 0; kappa < d; ++kappa) out.push_back(Packet{cr.specs[kappa], std::move(vals[off + kappa])});
  cr.interpolated = true;
  return out;
}

std::size_t RunConfig::n() const {
  std::size_t n = 0;
  for (const ClusterRates& c : classes) n += c.size;
  return n;
}

Rational RunStats::epsilon() const { return Rational(packets, mk) - 1; }

Rational RunStats::empirical_rate() const {
  if (responses_used == 0) fail(Errc::InvalidArgument, "no responses consumed");
  return Rational(mk, responses_used);
}

std::size_t RunStats::tasks(std::size_t u) const { return std::max<std::size_t>(1, last_round.at(u)); }

namespace {

class Coordinator {
 public:
  Coordinator(const RunConfig& cfg, const FMatrix* A, const FMatrix* B)
      : cfg_(cfg),
        field_(cfg.q),
        n_(cfg.n()),
        mk_(cfg.mk()),
        sampler_(cfg.model, cfg.seed, expand_profiles(cfg.classes), static_cast<double>(cfg.mk())),
        prng_(cfg.seed, stream::kProtocol, 0) {
    if (cfg.m == 0 || cfg.k == 0) fail(Errc::InvalidArgument, "m and k must be positive");
    if (cfg.z == 0) fail(Errc::InvalidArgument, "z must be positive");
    if (cfg.symbolic && cfg.packet_target == 0) fail(Errc::InvalidArgument, "symbolic run needs a packet target");
    round1_ = single_cluster_plan(n_, cfg.z);
    round1_.membership.assign(n_, 0);
    pts_ = EvalPoints::canonical(field_, round1_.d[0], cfg.z, n_);

    if (!cfg.symbolic) {
      soliton_.emplace(mk_, cfg.soliton);
      Rng drng(cfg.seed, stream::kData, 0);
      if (A) a_ = *A;
      else a_ = random_matrix(drng, field_, cfg.m * cfg.block_rows, cfg.inner);
      if (B) b_ = *B;
      else b_ = random_matrix(drng, field_, cfg.inner, cfg.k * cfg.block_cols);
      ablocks_ = split_rows(*a_, cfg.m);
      bblocks_ = split_cols(*b_, cfg.k);
      ctx_.field = field_;
      ctx_.m = cfg.m;
      ctx_.k = cfg.k;
      ctx_.z = cfg.z;
      ctx_.block_rows = ablocks_[0].rows();
      ctx_.inner = ablocks_[0].cols();
      ctx_.block_cols = bblocks_[0].cols();
      ctx_.ablocks = &ablocks_;
      ctx_.bblocks = &bblocks_;
      ctx_.soliton = &*soliton_;
      grid_.emplace(cfg.m, cfg.k);
    }

    first_durations_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) first_durations_[i] = sampler_.next(i);

    if (cfg.window_clustering) {
      std::vector<Completion> comps;
      for (std::size_t i = 0; i < n_; ++i) comps.push_back({i, first_durations_[i]});
      std::stable_sort(comps.begin(), comps.end(),
                       [](const Completion& x, const Completion& y) { return x.time < y.time; });
      plan_ = cluster_workers(comps, cfg.delta, cfg.z, 2 * cfg.z + 1);
    } else {
      std::vector<std::size_t> sizes = cfg.cluster_sizes;
      if (sizes.empty())
        for (const ClusterRates& c : cfg.classes) sizes.push_back(c.size);
      if (std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) != n_)
        fail(Errc::InvalidArgument, "cluster sizes must sum to n");
      plan_ = ClusterPlan::from_sizes(fit_cluster_sizes(sizes, cfg.z), cfg.z);
      rank_bounds_.push_back(0);
      for (std::size_t s : plan_.sizes) rank_bounds_.push_back(rank_bounds_.back() + s);
    }
    for (std::size_t u = 0; u < plan_.c(); ++u)
      if (plan_.d[u] > round1_.d[0]) fail(Errc::PlanViolation, "cluster payload exceeds node budget");

    stats_.mk = mk_;
    stats_.z = cfg.z;
    stats_.n = n_;
    stats_.round1_payload = round1_.d[0];
    stats_.tau.assign(plan_.c(), 0);
    stats_.last_round.assign(plan_.c(), 0);
    worker_round_.assign(n_, 1);
    products_.resize(n_);

    max_events_ = cfg.max_events ? cfg.max_events : 100000 + 50 * n_ * mk_;
  }

  RunResult run() {
    for (std::size_t i = 0; i < n_; ++i) {
      dispatch(i, 1);
      queue_.push(first_durations_[i], i);
    }
    while (!finished()) {
      if (stats_.events >= max_events_) fail(Errc::Timeout, "event budget exhausted");
      const Event e = queue_.advance();
      ++stats_.events;
      now_ = e.time;
      on_completion(e.worker);
      if (finished()) {
        stats_.makespan = now_;
        break;
      }
      const std::size_t next = worker_round_[e.worker] + 1;
      worker_round_[e.worker] = next;
      dispatch(e.worker, next);
      queue_.push(now_ + sampler_.next(e.worker), e.worker);
    }
    stats_.plan = plan_;
    RunResult res;
    if (!cfg_.symbolic) {
      res.A = a_;
      res.B = b_;
      res.C = grid_->assemble();
    }
    res.stats = std::move(stats_);
    return res;
  }

 private:
  bool finished() const {
    if (cfg_.symbolic) return stats_.packets >= cfg_.packet_target;
    return grid_->complete();
  }

  const ClusterPlan& plan_for(std::size_t t) const { return t == 1 ? round1_ : plan_; }

  RoundState& round(std::size_t t) {
    while (rounds_.size() < t) rounds_.emplace_back(rounds_.size() + 1, rounds_.empty() ? 1 : plan_.c());
    return rounds_[t - 1];
  }

  void dispatch(std::size_t w, std::size_t t) {
    products_[w].reset();
    if (cfg_.symbolic) return;
    const ClusterPlan& p = plan_for(t);
    RoundState& st = round(t);
    if (st.clusters[p.membership[w]].interpolated) return;  // result would be discarded
    TaskShare share = encode_task(st, p, pts_, w, ctx_, prng_);
    products_[w] = mat_mul(share.fshare, share.gshare);
  }

  void on_completion(std::size_t w) {
    const std::size_t t = worker_round_[w];
    if (t == 1 && !cfg_.window_clustering) {
      const std::size_t rank = next_rank_++;
      std::size_t u = 0;
      while (rank >= rank_bounds_[u + 1]) ++u;
      plan_.membership[w] = u;
    }
    const ClusterPlan& p = plan_for(t);
    const std::size_t u = p.membership[w];
    ++stats_.responses_received;
    RoundState& st = round(t);
    auto& cr = st.clusters[u];
    const std::size_t need = p.needed(u);
    if (!cr.interpolated && cr.count < need) {
      ++cr.count;
      if (!cfg_.symbolic) cr.responses.push_back(Sample{pts_.betas[w], std::move(*products_[w])});
      if (cr.count == need) try_interpolate(t, u);
    }
    if (cfg_.record_trace) {
      const std::size_t cu = t == 1 ? 1 : u + 1;
      stats_.trace.push_back(TraceRow{stats_.events, now_, w, cu, t, stats_.packets});
    }
  }

  void try_interpolate(std::size_t t, std::size_t u) {
    RoundState& st = round(t);
    const ClusterPlan& p = plan_for(t);
    if (u != 0 && !shared_ready(t)) {
      st.clusters[u].waiting = true;
      return;
    }
    do_interpolate(t, u);
    if (u == 0 && t > 1)
      for (std::size_t v = 1; v < p.c() && !finished(); ++v)
        if (st.clusters[v].waiting) {
          st.clusters[v].waiting = false;
          do_interpolate(t, v);
        }
  }

  bool shared_ready(std::size_t t) {
    if (cfg_.symbolic) return round(t).clusters[0].interpolated;
    return round(t).shared.has_value();
  }

  void do_interpolate(std::size_t t, std::size_t u) {
    RoundState& st = round(t);
    const ClusterPlan& p = plan_for(t);
    auto& cr = st.clusters[u];
    const std::size_t need = p.needed(u);
    if (cfg_.symbolic) {
      cr.interpolated = true;
    } else {
      std::vector<Packet> packets = interpolate_cluster(st, p, pts_, u, cr.responses);
      cr.responses.clear();
      cr.responses.shrink_to_fit();
      cr.poly = PolyPair{};
      for (Packet& pk : packets) {
        if (grid_->complete()) break;
        grid_->peel(pk.spec, std::move(pk.value));
      }
    }
    const std::size_t su = t == 1 ? 0 : u;
    ++stats_.tau[su];
    stats_.last_round[su] = std::max(stats_.last_round[su], t);
    stats_.responses_used += need;
    stats_.packets += p.d[u];
    stats_.interpolations.push_back(InterpolationRecord{t, su, need, p.d[u], now_});
    if (std::all_of(st.clusters.begin(), st.clusters.end(), [](const auto& c) { return c.interpolated; })) {
      st.R.clear();
      st.S.clear();
      st.shared.reset();
    }
  }

  const RunConfig& cfg_;
  Field field_;
  std::size_t n_, mk_;
  ServiceSampler sampler_;
  Rng prng_;
  ClusterPlan round1_, plan_;
  EvalPoints pts_;
  std::optional<RobustSoliton> soliton_;
  std::optional<FMatrix> a_, b_;
  std::vector<FMatrix> ablocks_, bblocks_;
  EncodeContext ctx_;
  std::optional<DecodedGrid> grid_;
  std::vector<double> first_durations_;
  std::vector<std::size_t> rank_bounds_;
  std::size_t next_rank_ = 0;
  std::vector<std::size_t> worker_round_;
  std::vector<std::optional<FMatrix>> products_;
  std::vector<RoundState> rounds_;
  EventQueue queue_;
  double now_ = 0;
  std::size_t max_events_ = 0;
  RunStats stats_;
};

}  // namespace

RunResult run_coordinator(const RunConfig& cfg, const FMatrix* A, const FMatrix* B) {
  Coordinator c(cfg, A, B);
  return c.run();
}

}  // namespace rpm3
