#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mbg {

/// Dense 3-index tensor, row-major [i][j][k].
template <typename T>
struct Tensor3 {
  int d0 = 0, d1 = 0, d2 = 0;
  std::vector<T> v;

  Tensor3() = default;
  Tensor3(int a, int b, int c, T fill = T{}) : d0(a), d1(b), d2(c), v(std::size_t(a) * b * c, fill) {}

  T& operator()(int i, int j, int k) { return v[(std::size_t(i) * d1 + j) * d2 + k]; }
  const T& operator()(int i, int j, int k) const { return v[(std::size_t(i) * d1 + j) * d2 + k]; }
  std::size_t size() const { return v.size(); }
  bool same_shape(const Tensor3& o) const { return d0 == o.d0 && d1 == o.d1 && d2 == o.d2; }
};

/// Q(s, a, o).
using QTable = Tensor3<double>;
/// N(s, a, o), per-triple visit counts.
using VisitCounts = Tensor3<std::int64_t>;

enum class Criterion { discounted, average };

/// Finite zero-sum Markov-Bandit game: the opponent commits to one column o
/// forever and o never enters the transition law.
struct TabularModel {
  int n_states = 0;
  int n_actions = 0;
  int n_opponent = 0;
  Tensor3<double> P;  ///< [s][a][s+]
  Tensor3<double> R;  ///< [s][a][o]
  Criterion criterion = Criterion::discounted;
  double gamma = 0.5;  ///< used only when criterion == discounted
  int initial_state = 0;
  double bound_c = 1.0;  ///< |R| <= bound_c everywhere
};

/// Per-state mixed action distribution, rows sum to 1.
struct MixedPolicy {
  int n_states = 0, n_actions = 0;
  std::vector<double> probs;  ///< row-major [s][a]

  MixedPolicy() = default;
  MixedPolicy(int ns, int na, double fill) : n_states(ns), n_actions(na), probs(std::size_t(ns) * na, fill) {}
  double& operator()(int s, int a) { return probs[std::size_t(s) * n_actions + a]; }
  double operator()(int s, int a) const { return probs[std::size_t(s) * n_actions + a]; }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Lists every violated model invariant; never throws.
ValidationReport validate_model(const TabularModel& model);

struct ConnectivityReport {
  bool strongly_connected = false;
  /// Designated state reached almost surely under every deterministic policy.
  std::optional<bool> recurrent;
  /// Set when the per-policy enumeration budget was exceeded and the answer
  /// came from the closed-avoiding-set fixpoint instead.
  bool exhaustive_skipped = false;
};

/// Necessary-condition graph check plus per-deterministic-policy reachability
/// of s_star: exhaustive enumeration on small models, otherwise the exact
/// polynomial fixpoint over closed sets avoiding s_star.
ConnectivityReport check_connectivity(const TabularModel& model, int s_star = 0);

/// Component o of the result is sum_a pi(s,a) * Q(s,a,o); exact, no sampling.
std::vector<double> expected_q(const QTable& Q, int s, const MixedPolicy& pi);

}  // namespace mbg
