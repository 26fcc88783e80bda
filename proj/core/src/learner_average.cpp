#include "mbg/learner_average.hpp"

#include <cmath>
#include <stdexcept>

#include "mbg/environments.hpp"
#include "mbg/learner_discounted.hpp"
#include "mbg/matrix_game.hpp"

namespace mbg {

double f_mean(const QTable& Q) {
  double sum = 0.0;
  for (double x : Q.v) sum += x;
  return sum / double(Q.size());
}

namespace {

int sample_index(const std::vector<double>& w, double u) {
  double acc = 0.0;
  for (int i = 0; i < int(w.size()); ++i) {
    acc += w[i];
    if (u < acc) return i;
  }
  return int(w.size()) - 1;
}

}  // namespace

AverageLearner::AverageLearner(const TabularModel& model, ExploreSchedule explore, std::uint64_t seed)
    : m_(model),
      Q_(model.n_states, model.n_actions, model.n_opponent),
      N_(model.n_states, model.n_actions, model.n_opponent),
      s_(model.initial_state),
      explore_(explore),
      rng_(seed) {
  if (model.criterion != Criterion::average)
    throw std::invalid_argument("AverageLearner: model criterion is not average");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (unif(rng_) < explore_.at(0)) {
    a_ = int(unif(rng_) * m_.n_actions) % m_.n_actions;
  } else {
    a_ = int(unif(rng_) * m_.n_actions) % m_.n_actions;  // Q_0 = 0: uniform either way
  }
}

TraceRow AverageLearner::step(const StepOverride* ov) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double eps = explore_.at(k_);

  const int snext = sample_transition(m_, s_, a_, rng_);

  // reward-augmented game at the successor state
  GameMatrix M(m_.n_actions, m_.n_opponent);
  for (int ap = 0; ap < m_.n_actions; ++ap)
    for (int o = 0; o < m_.n_opponent; ++o) M(ap, o) = m_.R(s_, a_, o) + Q_(snext, ap, o);
  MatrixGameSolution g = solve_maximin(M);
  const std::vector<double>& pi = (ov && ov->forced_pi) ? *ov->forced_pi : g.row_strategy;

  int o = g.tight_columns.front();
  if (unif(rng_) < eps) o = int(unif(rng_) * m_.n_opponent) % m_.n_opponent;
  if (ov && ov->forced_o >= 0) o = ov->forced_o;

  double eq = 0.0;
  for (int a = 0; a < m_.n_actions; ++a) eq += pi[a] * Q_(snext, a, o);

  const double f = qsum_ / double(Q_.size());
  const std::int64_t t = N_(s_, a_, o) + 1;
  double rate = beta_schedule(t);
  if (ov && ov->forced_rate >= 0.0) rate = ov->forced_rate;

  const double y = m_.R(s_, a_, o) + eq - f;
  const double before = Q_(s_, a_, o);
  const double after = (1.0 - rate) * before + rate * y;
  Q_(s_, a_, o) = after;
  qsum_ += after - before;
  N_(s_, a_, o) = t;

  if (std::abs(after) > 1e6)
    throw std::runtime_error("AverageLearner: |Q| exceeded 1e6 at step " + std::to_string(k_) +
                             " — diverging iterate");
  if ((k_ & 0x1fff) == 0x1fff) {  // kill accumulated drift in the running sum
    double s = 0.0;
    for (double x : Q_.v) s += x;
    qsum_ = s;
  }

  TraceRow row{k_, s_, a_, o, rate, after, qsum_ / double(Q_.size())};

  int anext;
  if (ov && ov->forced_next_action >= 0) {
    anext = ov->forced_next_action;
    unif(rng_);
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

MixedPolicy AverageLearner::greedy_policy() const {
  MixedPolicy pi(m_.n_states, m_.n_actions, 0.0);
  for (int s = 0; s < m_.n_states; ++s) {
    GameMatrix M(m_.n_actions, m_.n_opponent);
    for (int a = 0; a < m_.n_actions; ++a)
      for (int o = 0; o < m_.n_opponent; ++o) M(a, o) = Q_(s, a, o);
    MatrixGameSolution g = solve_maximin(M);
    for (int a = 0; a < m_.n_actions; ++a) pi(s, a) = g.row_strategy[a];
  }
  return pi;
}

RunTrace run_average(const TabularModel& model, std::int64_t steps, ExploreSchedule explore,
                     std::uint64_t seed, std::int64_t snapshot_every, bool record_rows) {
  AverageLearner learner(model, explore, seed);
  RunTrace trace;
  auto snap = [&](std::int64_t k) {
    trace.snapshots.push_back({k, learner.q(), learner.greedy_policy(), f_mean(learner.q())});
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
