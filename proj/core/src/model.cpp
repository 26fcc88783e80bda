#include "mbg/model.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mbg {

namespace {
constexpr double kRowSumTol = 1e-12;

std::string at(int s, int a) { return "(" + std::to_string(s) + "," + std::to_string(a) + ")"; }
}  // namespace

ValidationReport validate_model(const TabularModel& model) {
  ValidationReport rep;
  const auto& m = model;
  if (m.n_states <= 0 || m.n_actions <= 0 || m.n_opponent <= 0) {
    rep.violations.push_back("empty state/action/opponent space");
    return rep;
  }
  if (m.P.d0 != m.n_states || m.P.d1 != m.n_actions || m.P.d2 != m.n_states)
    rep.violations.push_back("P shape mismatch");
  if (m.R.d0 != m.n_states || m.R.d1 != m.n_actions || m.R.d2 != m.n_opponent)
    rep.violations.push_back("R shape mismatch");
  if (!rep.violations.empty()) return rep;

  if (m.criterion == Criterion::discounted && !(m.gamma > 0.0 && m.gamma < 1.0))
    rep.violations.push_back("gamma outside (0,1)");
  if (m.initial_state < 0 || m.initial_state >= m.n_states)
    rep.violations.push_back("initial_state out of range");
  if (!(m.bound_c > 0.0)) rep.violations.push_back("bound_c not positive");

  for (int s = 0; s < m.n_states; ++s)
    for (int a = 0; a < m.n_actions; ++a) {
      double sum = 0.0;
      bool bad_entry = false;
      for (int t = 0; t < m.n_states; ++t) {
        double p = m.P(s, a, t);
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) bad_entry = true;
        sum += p;
      }
      if (bad_entry) rep.violations.push_back("P entry outside [0,1] at " + at(s, a));
      if (std::abs(sum - 1.0) > kRowSumTol)
        rep.violations.push_back("P row sum " + std::to_string(sum) + " at " + at(s, a));
    }

  for (int s = 0; s < m.n_states; ++s)
    for (int a = 0; a < m.n_actions; ++a)
      for (int o = 0; o < m.n_opponent; ++o) {
        double r = m.R(s, a, o);
        if (!std::isfinite(r)) {
          rep.violations.push_back("non-finite R at " + at(s, a) + " o=" + std::to_string(o));
        } else if (std::abs(r) > m.bound_c) {
          rep.violations.push_back("|R| exceeds bound " + std::to_string(m.bound_c) + " at " + at(s, a) +
                                   " o=" + std::to_string(o));
        }
      }
  return rep;
}

namespace {

// Tarjan-free strong connectivity: forward and backward BFS from state 0.
bool strongly_connected(const TabularModel& m) {
  const int n = m.n_states;
  auto bfs = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w) {
        if (seen[w]) continue;
        bool edge = false;
        int from = forward ? u : w, to = forward ? w : u;
        for (int a = 0; a < m.n_actions && !edge; ++a) edge = m.P(from, a, to) > 0.0;
        if (edge) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    for (char c : seen)
      if (!c) return false;
    return true;
  };
  return bfs(true) && bfs(false);
}

// Under deterministic policy d, can every state reach s_star through
// positive-probability edges?
bool policy_reaches(const TabularModel& m, const std::vector<int>& d, int s_star) {
  const int n = m.n_states;
  std::vector<char> reaches(n, 0);  // reaches s_star
  reaches[s_star] = 1;
  // backward closure
  bool grew = true;
  while (grew) {
    grew = false;
    for (int s = 0; s < n; ++s) {
      if (reaches[s]) continue;
      for (int t = 0; t < n; ++t)
        if (reaches[t] && m.P(s, d[s], t) > 0.0) {
          reaches[s] = 1;
          grew = true;
          break;
        }
    }
  }
  for (char c : reaches)
    if (!c) return false;
  return true;
}

}  // namespace

ConnectivityReport check_connectivity(const TabularModel& model, int s_star) {
  ConnectivityReport rep;
  rep.strongly_connected = strongly_connected(model);

  // budget: n_actions^n_states deterministic policies, each O(n^2) to check
  double combos = 1.0;
  for (int s = 0; s < model.n_states; ++s) {
    combos *= model.n_actions;
    if (combos > 1e6) break;
  }
  if (combos * model.n_states <= 1e6) {
    std::vector<int> d(model.n_states, 0);
    bool all = true;
    while (true) {
      if (!policy_reaches(model, d, s_star)) {
        all = false;
        break;
      }
      int i = 0;
      for (; i < model.n_states; ++i) {
        if (++d[i] < model.n_actions) break;
        d[i] = 0;
      }
      if (i == model.n_states) break;
    }
    rep.recurrent = all;
    return rep;
  }

  // Larger action spaces: exact closed-set fixpoint instead of enumeration.
  // Some policy avoids s_star forever iff a nonempty set C (s_star excluded)
  // exists where every state keeps an action whose mass stays inside C.
  rep.exhaustive_skipped = true;
  std::vector<bool> in_c(model.n_states, true);
  in_c[s_star] = false;
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (int s = 0; s < model.n_states; ++s) {
      if (!in_c[s]) continue;
      bool has_safe_action = false;
      for (int a = 0; a < model.n_actions && !has_safe_action; ++a) {
        double escaping = 0.0;
        for (int t = 0; t < model.n_states; ++t)
          if (!in_c[t]) escaping += model.P(s, a, t);
        if (escaping == 0.0) has_safe_action = true;
      }
      if (!has_safe_action) {
        in_c[s] = false;
        shrunk = true;
      }
    }
  }
  bool avoid_set_empty = true;
  for (int s = 0; s < model.n_states; ++s) avoid_set_empty &= !in_c[s] || s == s_star;
  rep.recurrent = avoid_set_empty;
  return rep;
}

std::vector<double> expected_q(const QTable& Q, int s, const MixedPolicy& pi) {
  if (Q.d1 != pi.n_actions || s < 0 || s >= Q.d0 || s >= pi.n_states)
    throw std::invalid_argument("expected_q: shape mismatch");
  std::vector<double> out(Q.d2, 0.0);
  for (int a = 0; a < Q.d1; ++a) {
    double w = pi(s, a);
    if (w == 0.0) continue;
    for (int o = 0; o < Q.d2; ++o) out[o] += w * Q(s, a, o);
  }
  return out;
}

}  // namespace mbg
