#include "mbg/evaluation.hpp"

#include <cmath>
#include <random>

#include "mbg/rng.hpp"

namespace mbg {

int truncation_horizon(double gamma, double c, double tol) {
  const double tail0 = c / (1.0 - gamma);
  if (tail0 <= tol) return 1;
  return std::max(1, int(std::ceil(std::log(tol * (1.0 - gamma) / c) / std::log(gamma))));
}

namespace {

constexpr double kZ99 = 2.576;

int sample_action(const MixedPolicy& pi, int s, double u) {
  double acc = 0.0;
  for (int a = 0; a < pi.n_actions; ++a) {
    acc += pi(s, a);
    if (u < acc) return a;
  }
  return pi.n_actions - 1;
}

int sample_state(const Tensor3<double>& P, int s, int a, double u) {
  double acc = 0.0;
  for (int t = 0; t < P.d2; ++t) {
    acc += P(s, a, t);
    if (u < acc) return t;
  }
  return P.d2 - 1;
}

int sample_initial(const std::vector<double>& mu0, double u) {
  double acc = 0.0;
  for (int s = 0; s < int(mu0.size()); ++s) {
    acc += mu0[s];
    if (u < acc) return s;
  }
  return int(mu0.size()) - 1;
}

}  // namespace

std::vector<ConstraintEstimate> mc_constraint_values(const ConstrainedProblem& p, const MixedPolicy& pi,
                                                     int n_traj, double tol, std::uint64_t seed,
                                                     int average_horizon) {
  const int J = int(p.constraints.size());
  const bool discounted = p.criterion == Criterion::discounted;
  const int H = discounted ? truncation_horizon(p.gamma, p.bound_c, tol) : average_horizon;

  std::vector<double> sum(J, 0.0), sumsq(J, 0.0);
  std::vector<double> traj(J);
  for (int i = 0; i < n_traj; ++i) {
    // independent per-trajectory stream: fan-out order can't change results
    std::mt19937_64 rng(derive_seed(seed, stream::trajectory, std::uint64_t(i)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // initial state ~ mu0
    int s = sample_initial(p.mu0, unif(rng));
    std::fill(traj.begin(), traj.end(), 0.0);
    double disc = 1.0;
    for (int k = 0; k < H; ++k) {
      int a = sample_action(pi, s, unif(rng));
      const std::size_t idx = std::size_t(s) * p.n_actions + a;
      for (int j = 0; j < J; ++j) traj[j] += (discounted ? disc : 1.0) * p.constraints[j][idx];
      disc *= p.gamma;
      s = sample_state(p.P, s, a, unif(rng));
    }
    for (int j = 0; j < J; ++j) {
      double v = discounted ? traj[j] : traj[j] / H;
      sum[j] += v;
      sumsq[j] += v * v;
    }
  }

  std::vector<ConstraintEstimate> out(J);
  for (int j = 0; j < J; ++j) {
    double mean = sum[j] / n_traj;
    double var = std::max(0.0, sumsq[j] / n_traj - mean * mean);
    double se = n_traj > 1 ? std::sqrt(var / (n_traj - 1)) : std::sqrt(var);
    out[j] = {mean, kZ99 * se + tol, n_traj, H};
  }
  return out;
}

Verdict feasibility_verdict(const std::vector<ConstraintEstimate>& estimates, double margin) {
  if (estimates.empty()) throw std::invalid_argument("feasibility_verdict: no estimates");
  bool all_ok = true;
  for (const auto& e : estimates) {
    if (e.mean < -(margin + e.half_width)) return Verdict::infeasible;
    if (e.mean < -margin) all_ok = false;
  }
  return all_ok ? Verdict::feasible : Verdict::inconclusive;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::feasible: return "Feasible";
    case Verdict::infeasible: return "Infeasible";
    default: return "Inconclusive";
  }
}

BisectResult bisect_delta(const std::function<Verdict(double)>& solver, double delta_lo, double delta_hi,
                          double delta_tol) {
  BisectResult res;
  Verdict vlo = solver(delta_lo);
  res.verdicts.emplace_back(delta_lo, vlo);
  Verdict vhi = solver(delta_hi);
  res.verdicts.emplace_back(delta_hi, vhi);
  if (vlo != Verdict::feasible || vhi != Verdict::infeasible)
    throw BracketInvalid("bisect_delta: bracket must be feasible at delta_lo and infeasible at delta_hi");

  double lo = delta_lo, hi = delta_hi;
  while (hi - lo > delta_tol) {
    double mid = 0.5 * (lo + hi);
    Verdict v = solver(mid);
    res.verdicts.emplace_back(mid, v);
    if (v == Verdict::feasible) {
      lo = mid;
    } else if (v == Verdict::infeasible) {
      hi = mid;
    } else {
      // inconclusive: treat as not provably feasible, shrink toward delta_lo
      hi = mid;
    }
  }
  res.delta_star = 0.5 * (lo + hi);
  return res;
}

}  // namespace mbg
