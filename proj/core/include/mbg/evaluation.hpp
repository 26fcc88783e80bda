#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "mbg/environments.hpp"
#include "mbg/model.hpp"

namespace mbg {

struct ConstraintEstimate {
  double mean = 0.0;
  double half_width = 0.0;  ///< 99% confidence radius plus truncation bias
  int n_trajectories = 0;
  int horizon = 1;
};

/// Smallest H with gamma^H * c/(1-gamma) <= tol; at least 1.
int truncation_horizon(double gamma, double c, double tol);

/// Discounted-sum Monte Carlo estimate of each constraint value under policy,
/// n_traj independent trajectories truncated at truncation_horizon(gamma,
/// bound_c, tol). Average-criterion problems use one long trajectory per
/// replicate (length horizon_scale steps) with empirical means.
std::vector<ConstraintEstimate> mc_constraint_values(const ConstrainedProblem& problem,
                                                     const MixedPolicy& policy, int n_traj, double tol,
                                                     std::uint64_t seed, int average_horizon = 10000);

enum class Verdict { feasible, infeasible, inconclusive };

/// Feasible: every mean >= -margin. Infeasible: some mean < -(margin +
/// half_width). Otherwise inconclusive.
Verdict feasibility_verdict(const std::vector<ConstraintEstimate>& estimates, double margin);

const char* to_string(Verdict v);

struct BisectResult {
  double delta_star = 0.0;
  std::vector<std::pair<double, Verdict>> verdicts;  ///< every probe, in order
};

struct BracketInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bisection on the feasibility boundary of delta (solver probes one delta and
/// returns a verdict; inconclusive shrinks conservatively toward delta_lo).
/// Endpoints are probed first: delta_lo must be feasible, delta_hi infeasible.
BisectResult bisect_delta(const std::function<Verdict(double)>& solver, double delta_lo, double delta_hi,
                          double delta_tol);

}  // namespace mbg
