#include "mbg/learner_discounted.hpp"

#include <stdexcept>

#include "mbg/environments.hpp"
#include "mbg/matrix_game.hpp"

namespace mbg {

namespace {

GameMatrix q_slice(const QTable& Q, int s) {
  GameMatrix M(Q.d1, Q.d2);
  for (int a = 0; a < Q.d1; ++a)
    for (int o = 0; o < Q.d2; ++o) M(a, o) = Q(s, a, o);
  return M;
}

int sample_index(const std::vector<double>& w, double u) {
  double acc = 0.0;
  for (int i = 0; i < int(w.size()); ++i) {
    acc += w[i];
    if (u < acc) return i;
  }
  return int(w.size()) - 1;
}

}  // namespace

DiscountedLearner::DiscountedLearner(const TabularModel& model, ExploreSchedule explore, std::uint64_t seed)
    : m_(model),
      Q_(model.n_states, model.n_actions, model.n_opponent),
      N_(model.n_states, model.n_actions, model.n_opponent),
      s_(model.initial_state),
      explore_(explore),
      rng_(seed) {
  if (model.criterion != Criterion::discounted)
    throw std::invalid_argument("DiscountedLearner: model criterion is not discounted");
  // a_0: maximin of Q_0 at s_0 (uniform under the zero table), eps-mixed
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  MatrixGameSolution g = solve_maximin(q_slice(Q_, s_));
  if (unif(rng_) < explore_.at(0)) {
    a_ = int(unif(rng_) * m_.n_actions) % m_.n_actions;
  } else {
    a_ = sample_index(g.row_strategy, unif(rng_));
  }
}

TraceRow DiscountedLearner::step(const StepOverride* ov) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double eps = explore_.at(k_);

  const int snext = sample_transition(m_, s_, a_, rng_);

  MatrixGameSolution g = solve_maximin(q_slice(Q_, snext));
  const std::vector<double>& pi = (ov && ov->forced_pi) ? *ov->forced_pi : g.row_strategy;

  int o = g.tight_columns.front();  // deterministic lexicographic pick
  if (unif(rng_) < eps) o = int(unif(rng_) * m_.n_opponent) % m_.n_opponent;
  if (ov && ov->forced_o >= 0) o = ov->forced_o;

  double eq = 0.0;  // E(Q(s_{k+1}, pi, o)), pre-update values
  for (int a = 0; a < m_.n_actions; ++a) eq += pi[a] * Q_(snext, a, o);

  double rate = alpha_schedule(N_(s_, a_, o));
  if (ov && ov->forced_rate >= 0.0) rate = ov->forced_rate;
  const double y = m_.R(s_, a_, o) + m_.gamma * eq;
  Q_(s_, a_, o) = (1.0 - rate) * Q_(s_, a_, o) + rate * y;
  N_(s_, a_, o) += 1;

  TraceRow row{k_, s_, a_, o, rate, Q_(s_, a_, o), 0.0};

  int anext;
  if (ov && ov->forced_next_action >= 0) {
    anext = ov->forced_next_action;
    unif(rng_);  // keep the draw sequence aligned with the unforced path
  } else if (unif(rng_) < eps) {
    anext = int(unif(rng_) * m_.n_actions) % m_.n_actions;
  } else {
    anext = sample_index(pi, unif(rng_));
  }
  s_ = snext;
  a_ = anext;
  ++k_;
  return row;
}

MixedPolicy DiscountedLearner::greedy_policy() const {
  MixedPolicy pi(m_.n_states, m_.n_actions, 0.0);
  for (int s = 0; s < m_.n_states; ++s) {
    MatrixGameSolution g = solve_maximin(q_slice(Q_, s));
    for (int a = 0; a < m_.n_actions; ++a) pi(s, a) = g.row_strategy[a];
  }
  return pi;
}

RunTrace run_discounted(const TabularModel& model, std::int64_t steps, ExploreSchedule explore,
                        std::uint64_t seed, std::int64_t snapshot_every, bool record_rows) {
  DiscountedLearner learner(model, explore, seed);
  RunTrace trace;
  auto snap = [&](std::int64_t k) {
    trace.snapshots.push_back({k, learner.q(), learner.greedy_policy(), 0.0});
  };
  snap(0);
  for (std::int64_t k = 0; k < steps; ++k) {
    TraceRow row = learner.step();
    if (record_rows) trace.rows.push_back(row);
    if (snapshot_every > 0 && (k + 1) % snapshot_every == 0) snap(k + 1);
  }
  trace.final_q = learner.q();
  trace.final_policy = learner.greedy_policy();
  return trace;
}

}  // namespace mbg
