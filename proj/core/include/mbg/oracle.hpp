#pragma once

#include <stdexcept>
#include <vector>

#include "mbg/environments.hpp"
#include "mbg/model.hpp"

namespace mbg {

struct IterationBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// (TQ)(s,a,o) = R(s,a,o) + gamma * sum_{s+} P(s,a,s+) E_{pi_Q(s+)} Q(s+,.,o),
/// pi_Q(s+) the maximin policy of the Q slice at s+.
QTable apply_T_discounted(const TabularModel& model, const QTable& Q);

/// Iterates T to sup-norm increment <= tol*(1-gamma)/gamma, certifying
/// ||Q - Q*||_inf <= tol. Throws IterationBudgetExceeded.
std::pair<QTable, MixedPolicy> fixed_point_discounted(const TabularModel& model, double tol,
                                                      int max_sweeps = 100000);

/// Synchronous average-reward operator, anchored by f_value:
/// (T'Q)(s,a,o) = sum_{s+} P(s,a,s+) val(s,a,s+) - f_value with
/// val(s,a,s+) = max_pi min_o' [ R(s,a,o') + E_pi Q(s+,.,o') ],
/// the maximin value (not a fixed column) of the reward-augmented game.
/// Keeping the minimum inside the transition sum makes this map monotone
/// and constant-shift-commuting, hence nonexpansive in both the sup norm
/// and the span seminorm.
QTable apply_T_average(const TabularModel& model, const QTable& Q, double f_value);

/// Per-column variant: (TQ)(s,a,o) = R(s,a,o) +
/// sum_{s+} P(s,a,s+) E_{pi~(s,a,s+)} Q(s+,.,o) - f_value, where
/// pi~(s,a,s+) is the maximin policy of the reward-augmented game
/// M[a+][o'] = R(s,a,o') + Q(s+,a+,o') — the same game the learner solves,
/// so this is the mean field of the asynchronous update and rvi_average
/// iterates it. Unlike the value form it evaluates a fixed column under the
/// maximin policy, which is discontinuous where that policy jumps between
/// ties, so it is not nonexpansive in general.
QTable apply_T_average_per_column(const TabularModel& model, const QTable& Q, double f_value);

struct AverageSolution {
  QTable Q_star;
  std::vector<double> v_star;    ///< per-column gain of the maximin policy
  std::vector<double> H_star;    ///< bias [s][o] row-major, E_{pi*} Q*(s,.,o)
  MixedPolicy policy;
  int iterations = 0;
};

/// Damped relative value iteration Q <- (1-eta)Q + eta T(Q) on the
/// per-column operator, eta = 0.5, f = f_mean(Q) each sweep, until the
/// increment's span seminorm <= tol.
/// Gains extracted by exact per-column policy evaluation under the final
/// maximin policy. Throws IterationBudgetExceeded.
AverageSolution rvi_average(const TabularModel& model, double tol, int max_sweeps = 100000);

struct CmdpLpResult {
  double value = 0.0;               ///< objective optimum; 0 in feasibility mode
  std::vector<double> occupancy;    ///< rho(s,a) row-major
  MixedPolicy policy;
  bool feasible = false;
};

/// Occupancy-measure LP: rho >= 0, flow conservation against (1-gamma)mu0,
/// constraint values sum(rho r^j)/(1-gamma) >= 0; maximizes the objective
/// reward when present, otherwise pure feasibility.
CmdpLpResult cmdp_lp_discounted(const ConstrainedProblem& problem);

/// Game-value feasibility classifier (discounted: min_o E_{pi*(s0)} Q*(s0,.,o);
/// average: min_o v*(o)). Feasible iff >= 0.
double feasibility_value(const TabularModel& game, int s0);

/// Stationary distribution of the chain induced by pi (unichain assumed).
std::vector<double> stationary_distribution(const Tensor3<double>& P, const MixedPolicy& pi);

}  // namespace mbg
