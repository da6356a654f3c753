#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "rpm3/algebra.hpp"
#include "rpm3/fountain.hpp"
#include "rpm3/lagrange.hpp"
#include "rpm3/rational.hpp"
#include "rpm3/sim.hpp"

namespace rpm3 {

inline constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

/// Payload count of the first cluster, floor((n_1 - 2z + 1) / 2); 0 when that is below 1.
std::size_t first_cluster_payload(std::size_t n1, std::size_t z);
/// Payload count of a later cluster, floor((n_u - z + 1) / 2); 0 when that is below 1.
std::size_t later_cluster_payload(std::size_t nu, std::size_t z);

/// Cluster sizes, payload counts and worker membership. Clusters are 0-based internally.
struct ClusterPlan {
  std::size_t z = 1;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> d;
  std::vector<std::size_t> membership;  ///< worker -> cluster, kUnassigned until known

  std::size_t c() const { return sizes.size(); }
  std::size_t n() const;
  /// Worker evaluations consumed by one interpolation of cluster u.
  std::size_t needed(std::size_t u) const;

  /// Plan with the given sizes; membership left unassigned. Throws TooFewWorkers on d_u < 1.
  static ClusterPlan from_sizes(std::vector<std::size_t> sizes, std::size_t z);
  void validate() const;
};

/// One cluster holding every worker, as used in round 1.
ClusterPlan single_cluster_plan(std::size_t n, std::size_t z);

/**
 * Merges configured sizes until every cluster has d_u >= 1: the first cluster absorbs its
 * successors until n_1 >= 2z+1, later ones until n_u >= z+1, and a short tail joins its predecessor.
 */
std::vector<std::size_t> fit_cluster_sizes(const std::vector<std::size_t>& sizes, std::size_t z);

struct Completion {
  std::size_t worker;
  double time;
};

/**
 * Greedy time-window clustering of round-1 completions (sorted by time). A cluster holds the
 * workers finishing within delta of its first member; the window grows by 50% while the cluster
 * is below its threshold (first_min for cluster 1, default 2z-1; z+1 afterwards). Fewer than z+1
 * leftover workers join the last cluster.
 */
ClusterPlan cluster_workers(const std::vector<Completion>& completions, double delta, std::size_t z,
                            std::size_t first_min = 0);

struct Packet {
  FountainSpec spec;
  FMatrix value;
};

/// Master-side state of one round.
struct RoundState {
  struct ClusterRound {
    bool created = false;
    bool interpolated = false;
    bool waiting = false;  ///< has its points, needs the shared evaluations
    PolyPair poly;
    std::vector<FountainSpec> specs;
    std::vector<Sample> responses;
    std::size_t count = 0;
  };

  std::size_t t = 0;
  std::vector<FMatrix> R, S;
  std::vector<ClusterRound> clusters;
  std::optional<std::vector<FMatrix>> shared;  ///< h_t(alpha_1..alpha_z)

  RoundState(std::size_t round, std::size_t cluster_count) : t(round), clusters(cluster_count) {}
};

/// Data and code parameters needed to encode tasks.
struct EncodeContext {
  Field field;
  std::size_t m = 1, k = 1, z = 1;
  std::size_t block_rows = 1, inner = 1, block_cols = 1;
  const std::vector<FMatrix>* ablocks = nullptr;
  const std::vector<FMatrix>* bblocks = nullptr;
  const RobustSoliton* soliton = nullptr;
};

struct TaskShare {
  std::size_t worker;
  std::size_t round;
  std::size_t cluster;
  u64 x;
  FMatrix fshare;
  FMatrix gshare;
};

/**
 * Share of `worker` for round st.t under `plan`. The first call for a (round, cluster) draws the
 * round masks if absent (R_1..R_z then S_1..S_z) and then d_u Fountain specs.
 */
TaskShare encode_task(RoundState& st, const ClusterPlan& plan, const EvalPoints& pts, std::size_t worker,
                      const EncodeContext& ctx, Rng& rng);

/**
 * Interpolates cluster u of round st.t from worker responses. Cluster 0 recovers and caches the
 * shared evaluations; later clusters reuse them. Returns the d_u decoded packets.
 */
std::vector<Packet> interpolate_cluster(RoundState& st, const ClusterPlan& plan, const EvalPoints& pts,
                                        std::size_t u, const std::vector<Sample>& responses);

struct RunConfig {
  u64 q = Field::kDefaultModulus;
  std::size_t m = 2, k = 2, z = 1;
  std::size_t block_rows = 1, inner = 1, block_cols = 1;
  ServiceModel model = ServiceModel::Model1;
  std::vector<ClusterRates> classes;         ///< worker speed classes; n = total size
  std::vector<std::size_t> cluster_sizes;    ///< protocol cluster sizes; empty = class sizes
  bool window_clustering = false;            ///< cluster by round-1 times instead of by size
  double delta = 0.0;                        ///< window for window_clustering (scaled time)
  SolitonParams soliton;
  std::uint64_t seed = 1;
  std::size_t max_events = 0;                ///< 0 picks a generous default
  bool record_trace = false;
  bool symbolic = false;                     ///< latency only: no matrices, stop at packet_target
  std::size_t packet_target = 0;

  std::size_t n() const;
  std::size_t mk() const { return m * k; }
};

struct InterpolationRecord {
  std::size_t round;
  std::size_t cluster;
  std::size_t points;
  std::size_t packets;
  double time;
};

struct TraceRow {
  std::size_t event_index;
  double time;
  std::size_t worker;
  std::size_t cluster;  ///< 1-based
  std::size_t round;
  std::size_t packets_total;
};

struct RunStats {
  std::size_t mk = 0, z = 0, n = 0;
  ClusterPlan plan;                     ///< frozen plan used from round 2 on
  std::size_t round1_payload = 0;
  std::vector<std::size_t> tau;         ///< interpolations per cluster; round 1 counts for cluster 0
  std::vector<std::size_t> last_round;  ///< highest interpolated round per cluster, 0 if none
  std::size_t responses_used = 0;       ///< N: worker evaluations consumed by interpolations
  std::size_t responses_received = 0;
  std::size_t packets = 0;              ///< Fountain packets passed to the decoder
  std::size_t events = 0;
  double makespan = 0;
  std::vector<InterpolationRecord> interpolations;
  std::vector<TraceRow> trace;

  Rational epsilon() const;
  Rational empirical_rate() const;
  /// Tasks run by each worker of cluster u up to its last useful round (at least 1).
  std::size_t tasks(std::size_t u) const;
};

struct RunResult {
  std::optional<FMatrix> A, B, C;
  RunStats stats;
};

/// Event-driven coordinator. Generates A and B from the data stream unless given.
RunResult run_coordinator(const RunConfig& cfg, const FMatrix* A = nullptr, const FMatrix* B = nullptr);

}  // namespace rpm3
