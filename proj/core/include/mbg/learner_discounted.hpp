#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mbg/model.hpp"
#include "mbg/trace.hpp"

namespace mbg {

/// alpha = 1/(1+count), the per-triple Robbins-Monro rate.
inline double alpha_schedule(std::int64_t count) { return 1.0 / (1.0 + double(count)); }

/// Test hooks replicating hand-computed traces: force the opponent pick, the
/// next action, the policy used in the expectation, or the learning rate.
struct StepOverride {
  int forced_o = -1;
  int forced_next_action = -1;
  double forced_rate = -1.0;
  const std::vector<double>* forced_pi = nullptr;  ///< length n_actions, replaces pi_{k+1}
};

/// Asynchronous maximin Q-learning, discounted criterion.
class DiscountedLearner {
 public:
  DiscountedLearner(const TabularModel& model, ExploreSchedule explore, std::uint64_t seed);

  /// One transition + one Q-entry write. Returns what was written.
  TraceRow step(const StepOverride* ov = nullptr);

  const QTable& q() const { return Q_; }
  const VisitCounts& counts() const { return N_; }
  std::int64_t step_count() const { return k_; }
  int current_state() const { return s_; }
  int current_action() const { return a_; }
  void set_current_action(int a) { a_ = a; }

  /// Maximin policy of the current Q, one matrix-game solve per state.
  MixedPolicy greedy_policy() const;

 private:
  const TabularModel& m_;
  QTable Q_;
  VisitCounts N_;
  int s_, a_;
  std::int64_t k_ = 0;
  ExploreSchedule explore_;
  std::mt19937_64 rng_;
};

/// Full run with snapshots every snapshot_every steps (0 = none but final).
/// record_rows controls the per-step log (large for big K).
RunTrace run_discounted(const TabularModel& model, std::int64_t steps, ExploreSchedule explore,
                        std::uint64_t seed, std::int64_t snapshot_every = 0, bool record_rows = false);

}  // namespace mbg
