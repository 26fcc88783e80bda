#pragma once

#include <optional>
#include <random>
#include <vector>

#include "mbg/model.hpp"

namespace mbg {

/// CMDP data: base MDP plus J constraint rewards r^j(s,a) (satisfaction means
/// discounted/average value >= 0) and an optional objective reward r^0.
struct ConstrainedProblem {
  int n_states = 0;
  int n_actions = 0;
  Tensor3<double> P;  ///< [s][a][s+]
  Criterion criterion = Criterion::discounted;
  double gamma = 0.5;
  std::vector<double> mu0;                        ///< initial distribution, length n_states
  std::vector<std::vector<double>> constraints;   ///< J rewards, each row-major [s][a]
  std::optional<std::vector<double>> objective;   ///< row-major [s][a]
  double bound_c = 1.0;
};

/// Constraints become opponent columns: R[s][a][j] = r^j(s,a).
TabularModel assemble_game(const ConstrainedProblem& problem);

/// Turns the objective into one more constraint: r^0 - (1-gamma)*delta
/// (discounted) or r^0 - delta (average). The objective slot is cleared.
ConstrainedProblem shift_rewards(const ConstrainedProblem& problem, double delta);

enum class StaticExample { example1, example2 };

/// example1: 1 state, 2 actions, matching-pennies constraints r^1=(1,-1),
/// r^2=(-1,1). example2: 1 state, 3 actions, r^j(a) = [a==j]/2 shifted by the
/// 1/3 targets into r^j - 1/6. Both gamma = 0.5, no objective.
ConstrainedProblem build_static_example(StaticExample which);

struct QueueParams {
  int L = 5;
  std::vector<double> service = {0.3, 0.4, 0.5, 0.6, 0.7};
  std::vector<double> flow = {0.0, 0.2, 0.4, 0.6};
  double gamma = 0.5;
};

/// Single-server queue, states 0..L, actions (a,b) = service x flow flattened
/// as a*|B|+b. Objective 5-s; constraints 5-10a and 2-5(1-b)^2. Start empty.
ConstrainedProblem build_queue(const QueueParams& params = {});

/// Inverse-CDF draw of the successor state from P[s][a][.], one uniform.
int sample_transition(const TabularModel& model, int s, int a, std::mt19937_64& rng);

}  // namespace mbg
