#include "mbg/environments.hpp"

#include <cmath>
#include <stdexcept>

namespace mbg {

TabularModel assemble_game(const ConstrainedProblem& problem) {
  const int J = int(problem.constraints.size());
  if (J < 1) throw std::invalid_argument("assemble_game: no constraints");
  TabularModel m;
  m.n_states = problem.n_states;
  m.n_actions = problem.n_actions;
  m.n_opponent = J;
  m.P = problem.P;
  m.criterion = problem.criterion;
  m.gamma = problem.gamma;
  m.bound_c = 2.0 * problem.bound_c;
  m.R = Tensor3<double>(m.n_states, m.n_actions, J);
  for (int s = 0; s < m.n_states; ++s)
    for (int a = 0; a < m.n_actions; ++a)
      for (int j = 0; j < J; ++j) m.R(s, a, j) = problem.constraints[j][std::size_t(s) * m.n_actions + a];
  // initial state: the mode of mu0 (a point-mass mu0 gives the exact start)
  int best = 0;
  for (int s = 1; s < m.n_states; ++s)
    if (problem.mu0[s] > problem.mu0[best]) best = s;
  m.initial_state = best;
  return m;
}

ConstrainedProblem shift_rewards(const ConstrainedProblem& problem, double delta) {
  if (!problem.objective) throw std::invalid_argument("shift_rewards: problem has no objective reward");
  ConstrainedProblem out = problem;
  const double shift = problem.criterion == Criterion::discounted ? (1.0 - problem.gamma) * delta : delta;
  std::vector<double> shifted = *problem.objective;
  for (double& r : shifted) r -= shift;
  out.constraints.push_back(std::move(shifted));
  out.objective.reset();
  out.bound_c = problem.bound_c + std::abs(shift);
  return out;
}

ConstrainedProblem build_static_example(StaticExample which) {
  ConstrainedProblem p;
  p.n_states = 1;
  p.criterion = Criterion::discounted;
  p.gamma = 0.5;
  p.mu0 = {1.0};
  if (which == StaticExample::example1) {
    p.n_actions = 2;
    p.P = Tensor3<double>(1, 2, 1, 1.0);
    p.constraints = {{1.0, -1.0}, {-1.0, 1.0}};
    p.bound_c = 1.0;
  } else {
    p.n_actions = 3;
    p.P = Tensor3<double>(1, 3, 1, 1.0);
    // r^j(a) = [a==j]/2, target 1/3 each, pre-shifted by (1-gamma)/3 = 1/6
    for (int j = 0; j < 3; ++j) {
      std::vector<double> r(3, -1.0 / 6.0);
      r[j] += 0.5;
      p.constraints.push_back(std::move(r));
    }
    p.bound_c = 1.0;
  }
  return p;
}

ConstrainedProblem build_queue(const QueueParams& params) {
  const int L = params.L;
  if (L < 1) throw std::invalid_argument("build_queue: L must be >= 1");
  for (double a : params.service)
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("build_queue: service rates must lie in (0,1)");
  for (double b : params.flow)
    if (!(b >= 0.0 && b < 1.0)) throw std::invalid_argument("build_queue: flow rates must lie in [0,1)");
  if (!(params.gamma > 0.0 && params.gamma < 1.0)) throw std::invalid_argument("build_queue: gamma outside (0,1)");

  const int nA = int(params.service.size()), nB = int(params.flow.size());
  const int ns = L + 1, na = nA * nB;
  ConstrainedProblem p;
  p.n_states = ns;
  p.n_actions = na;
  p.criterion = Criterion::discounted;
  p.gamma = params.gamma;
  p.mu0.assign(ns, 0.0);
  p.mu0[0] = 1.0;
  p.P = Tensor3<double>(ns, na, ns);

  for (int s = 0; s < ns; ++s)
    for (int ia = 0; ia < nA; ++ia)
      for (int ib = 0; ib < nB; ++ib) {
        const double a = params.service[ia], b = params.flow[ib];
        const int act = ia * nB + ib;
        if (s == 0) {
          p.P(s, act, 0) = 1.0 - b * (1.0 - a);
          p.P(s, act, 1) = b * (1.0 - a);
        } else if (s == L) {
          p.P(s, act, L - 1) = a;
          p.P(s, act, L) = 1.0 - a;
        } else {
          p.P(s, act, s - 1) = a * (1.0 - b);
          p.P(s, act, s) = a * b + (1.0 - a) * (1.0 - b);
          p.P(s, act, s + 1) = (1.0 - a) * b;
        }
      }

  std::vector<double> r0(std::size_t(ns) * na), r1(r0.size()), r2(r0.size());
  for (int s = 0; s < ns; ++s)
    for (int ia = 0; ia < nA; ++ia)
      for (int ib = 0; ib < nB; ++ib) {
        const double a = params.service[ia], b = params.flow[ib];
        const std::size_t idx = std::size_t(s) * na + ia * nB + ib;
        r0[idx] = 5.0 - s;        // negated holding cost s-5
        r1[idx] = 5.0 - 10.0 * a; // negated service cost 10a-5
        r2[idx] = 2.0 - 5.0 * (1.0 - b) * (1.0 - b);  // negated flow cost
      }
  p.objective = std::move(r0);
  p.constraints = {std::move(r1), std::move(r2)};
  p.bound_c = 10.0;
  return p;
}

int sample_transition(const TabularModel& model, int s, int a, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  for (int t = 0; t < model.n_states; ++t) {
    acc += model.P(s, a, t);
    if (u < acc) return t;
  }
  // roundoff tail: last positive-probability successor
  for (int t = model.n_states - 1; t >= 0; --t)
    if (model.P(s, a, t) > 0.0) return t;
  return model.n_states - 1;
}

}  // namespace mbg
