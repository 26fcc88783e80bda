#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mbg/model.hpp"

namespace mbg {

/// One Q update: which triple was written, at what rate, to what value.
struct TraceRow {
  std::int64_t step = 0;
  int s = 0, a = 0, o = 0;
  double rate = 0.0;     ///< alpha (discounted) or beta (average)
  double q_value = 0.0;  ///< entry value after the write
  double f_value = 0.0;  ///< f_mean(Q) after the write; average mode only
};

struct Snapshot {
  std::int64_t step = 0;
  QTable Q;
  MixedPolicy policy;  ///< greedy maximin policy of Q
  double f_value = 0.0;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::vector<Snapshot> snapshots;
  QTable final_q;
  MixedPolicy final_policy;
};

/// epsilon-exploration schedule: eps0 decaying as 1/sqrt(k) to a floor.
struct ExploreSchedule {
  double eps0 = 0.05;
  double floor = 0.01;
  bool sqrt_decay = true;

  static ExploreSchedule constant(double eps) { return {eps, eps, false}; }

  double at(std::int64_t k) const {
    if (!sqrt_decay || k < 1) return eps0;
    return std::max(eps0 / std::sqrt(double(k)), floor);
  }
};

}  // namespace mbg
