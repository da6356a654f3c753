#include "rpm3/sim.hpp"

#include "rpm3/error.hpp"

namespace rpm3 {

std::vector<WorkerProfile> expand_profiles(const std::vector<ClusterRates>& classes) {
  std::vector<WorkerProfile> out;
  for (const ClusterRates& c : classes) {
    if (!(c.lambda > 0) || c.shift < 0) fail(Errc::InvalidArgument, "class needs lambda > 0, shift >= 0");
    out.insert(out.end(), c.size, WorkerProfile{c.lambda, c.shift});
  }
  return out;
}

void apply_shift_convention(std::vector<ClusterRates>& classes, double t_m) {
  for (ClusterRates& c : classes) c.shift = t_m / c.lambda;
}

double draw_model1(const WorkerProfile& p, double mk, Rng& rng, double& frozen_y) {
  if (frozen_y < 0) frozen_y = rng.exponential(p.lambda * mk);
  return p.shift / mk + frozen_y;
}

double draw_model2(const WorkerProfile& p, double mk, Rng& rng) {
  return p.shift / mk + rng.exponential(p.lambda * mk);
}

ServiceSampler::ServiceSampler(ServiceModel model, std::uint64_t seed, std::vector<WorkerProfile> workers,
                               double mk)
    : model_(model), mk_(mk), profiles_(std::move(workers)) {
  if (!(mk > 0)) fail(Errc::InvalidArgument, "mk must be positive");
  streams_.reserve(profiles_.size());
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    const WorkerProfile& p = profiles_[i];
    if (!(p.lambda > 0) || p.shift < 0) fail(Errc::InvalidArgument, "worker needs lambda > 0, shift >= 0");
    streams_.emplace_back(seed, stream::kWorker, i);
  }
  frozen_.assign(profiles_.size(), -1.0);
}

double ServiceSampler::next(std::size_t w) {
  if (w >= profiles_.size()) fail(Errc::IndexOutOfRange, "unknown worker");
  if (model_ == ServiceModel::Model1) return draw_model1(profiles_[w], mk_, streams_[w], frozen_[w]);
  return draw_model2(profiles_[w], mk_, streams_[w]);
}

void EventQueue::push(double time, std::size_t worker) {
  if (time < last_) fail(Errc::InvalidArgument, "event scheduled in the past");
  heap_.push(Event{time, worker});
}

Event EventQueue::advance() {
  if (heap_.empty()) fail(Errc::EmptyQueue, "advance on empty queue");
  Event e = heap_.top();
  heap_.pop();
  last_ = e.time;
  return e;
}

}  // namespace rpm3
