#pragma once

#include <cstddef>
#include <cstdint>
#include <queue>
#include <vector>

#include "rpm3/rng.hpp"

namespace rpm3 {

enum class ServiceModel {
  Model1 = 1,  ///< per-worker exponential drawn once, reused for every task
  Model2 = 2,  ///< fresh shifted exponential per task
};

/// Unscaled service parameters of one worker class; per task the shift is shift/mk and the rate lambda*mk.
struct WorkerProfile {
  double lambda = 1.0;
  double shift = 0.0;
};

/// A cluster of identical workers as configured (speed class, not protocol cluster).
struct ClusterRates {
  std::size_t size = 0;
  double lambda = 1.0;
  double shift = 0.0;
};

/// Expands classes into one profile per worker, in class order.
std::vector<WorkerProfile> expand_profiles(const std::vector<ClusterRates>& classes);

/// Shifts s_u = t_m / lambda_u for every class.
void apply_shift_convention(std::vector<ClusterRates>& classes, double t_m);

/**
 * Per-task durations. Worker i draws from its own substream (seed, kWorker, i), so the
 * durations of one worker do not depend on the order in which other workers are served.
 */
class ServiceSampler {
 public:
  ServiceSampler(ServiceModel model, std::uint64_t seed, std::vector<WorkerProfile> workers, double mk);

  /// Duration of the worker's next task.
  double next(std::size_t worker);

  ServiceModel model() const { return model_; }
  std::size_t workers() const { return profiles_.size(); }
  const WorkerProfile& profile(std::size_t w) const { return profiles_[w]; }
  double mk() const { return mk_; }

 private:
  ServiceModel model_;
  double mk_;
  std::vector<WorkerProfile> profiles_;
  std::vector<Rng> streams_;
  std::vector<double> frozen_;  // Model 1: s/mk + Y, negative until drawn
};

/// Model-1 duration for a worker whose Y is drawn from rng on first use.
double draw_model1(const WorkerProfile& p, double mk, Rng& rng, double& frozen_y);
/// Model-2 duration: shift/mk + Exp(lambda*mk), fresh per call.
double draw_model2(const WorkerProfile& p, double mk, Rng& rng);

struct Event {
  double time;
  std::size_t worker;
};

/// Min-time queue of worker completions; equal times pop the lower worker index first.
class EventQueue {
 public:
  void push(double time, std::size_t worker);
  Event advance();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.worker > b.worker;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  double last_ = 0;
};

}  // namespace rpm3
