#pragma once

#include <cstdint>
#include <random>

#include "mbg/model.hpp"
#include "mbg/trace.hpp"

namespace mbg {

/// Full-table arithmetic mean: the cheapest Phi-function anchor (Lipschitz-1,
/// homogeneous, shift-equivariant).
double f_mean(const QTable& Q);

/// beta = 1/t, per-triple visit index t >= 1.
inline double beta_schedule(std::int64_t t) { return 1.0 / double(t); }

struct StepOverride;  // learner_discounted.hpp

/// Asynchronous maximin Q-learning, average-reward criterion. The per-step
/// matrix game includes the immediate reward inside the min over columns:
/// M[a+][o] = R(s_k, a_k, o) + Q(s_{k+1}, a+, o).
class AverageLearner {
 public:
  AverageLearner(const TabularModel& model, ExploreSchedule explore, std::uint64_t seed);

  /// One transition + one Q-entry write; throws on divergence (|Q| > 1e6).
  TraceRow step(const StepOverride* ov = nullptr);

  const QTable& q() const { return Q_; }
  const VisitCounts& counts() const { return N_; }
  std::int64_t step_count() const { return k_; }
  double f_current() const { return qsum_ / double(Q_.size()); }
  MixedPolicy greedy_policy() const;

 private:
  const TabularModel& m_;
  QTable Q_;
  VisitCounts N_;
  int s_, a_;
  std::int64_t k_ = 0;
  double qsum_ = 0.0;  ///< running entry sum, refreshed periodically
  ExploreSchedule explore_;
  std::mt19937_64 rng_;
};

RunTrace run_average(const TabularModel& model, std::int64_t steps, ExploreSchedule explore,
                     std::uint64_t seed, std::int64_t snapshot_every = 0, bool record_rows = false);

}  // namespace mbg
