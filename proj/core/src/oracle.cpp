#include "mbg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mbg/learner_average.hpp"
#include "mbg/matrix_game.hpp"
#include "mbg/simplex.hpp"

namespace mbg {

namespace {

GameMatrix q_slice(const QTable& Q, int s) {
  GameMatrix M(Q.d1, Q.d2);
  for (int a = 0; a < Q.d1; ++a)
    for (int o = 0; o < Q.d2; ++o) M(a, o) = Q(s, a, o);
  return M;
}

double sup_diff(const QTable& A, const QTable& B) {
  double d = 0.0;
  for (std::size_t i = 0; i < A.v.size(); ++i) d = std::max(d, std::abs(A.v[i] - B.v[i]));
  return d;
}

double span_diff(const QTable& A, const QTable& B) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < A.v.size(); ++i) {
    double d = A.v[i] - B.v[i];
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi - lo;
}

MixedPolicy maximin_policy(const QTable& Q) {
  MixedPolicy pi(Q.d0, Q.d1, 0.0);
  for (int s = 0; s < Q.d0; ++s) {
    MatrixGameSolution g = solve_maximin(q_slice(Q, s));
    for (int a = 0; a < Q.d1; ++a) pi(s, a) = g.row_strategy[a];
  }
  return pi;
}

// dense solve of A x = b via Gaussian elimination with partial pivoting
std::vector<double> gauss_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const int n = int(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    std::swap(b[col], b[piv]);
    double d = A[col][col];
    if (std::abs(d) < 1e-14) throw std::runtime_error("singular linear system in oracle");
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = A[r][col] / d;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

}  // namespace

QTable apply_T_discounted(const TabularModel& m, const QTable& Q) {
  if (m.criterion != Criterion::discounted)
    throw std::invalid_argument("apply_T_discounted: criterion mismatch");
  // one maximin policy per successor state
  std::vector<std::vector<double>> eq(m.n_states);  // E_{pi_Q(s+)} Q(s+,.,o) per o
  MixedPolicy pi = maximin_policy(Q);
  for (int sp = 0; sp < m.n_states; ++sp) eq[sp] = expected_q(Q, sp, pi);

  QTable out(m.n_states, m.n_actions, m.n_opponent);
  for (int s = 0; s < m.n_states; ++s)
    for (int a = 0; a < m.n_actions; ++a)
      for (int o = 0; o < m.n_opponent; ++o) {
        double acc = 0.0;
        for (int sp = 0; sp < m.n_states; ++sp) {
          double p = m.P(s, a, sp);
          if (p > 0.0) acc += p * eq[sp][o];
        }
        out(s, a, o) = m.R(s, a, o) + m.gamma * acc;
      }
  return out;
}

std::pair<QTable, MixedPolicy> fixed_point_discounted(const TabularModel& m, double tol, int max_sweeps) {
  QTable Q(m.n_states, m.n_actions, m.n_opponent);
  const double stop = tol * (1.0 - m.gamma) / m.gamma;
  for (int it = 0; it < max_sweeps; ++it) {
    QTable next = apply_T_discounted(m, Q);
    double d = sup_diff(next, Q);
    Q = std::move(next);
    if (d <= stop) return {Q, maximin_policy(Q)};
  }
  throw IterationBudgetExceeded("fixed_point_discounted: no convergence within sweep budget");
}

QTable apply_T_average(const TabularModel& m, const QTable& Q, double f_value) {
  if (m.criterion != Criterion::average)
    throw std::invalid_argument("apply_T_average: criterion mismatch");
  QTable out(m.n_states, m.n_actions, m.n_opponent);
  GameMatrix M(m.n_actions, m.n_opponent);
  for (int s = 0; s < m.n_states; ++s)
    for (int a = 0; a < m.n_actions; ++a) {
      double acc = 0.0;
      for (int sp = 0; sp < m.n_states; ++sp) {
        double p = m.P(s, a, sp);
        if (p <= 0.0) continue;
        for (int ap = 0; ap < m.n_actions; ++ap)
          for (int o = 0; o < m.n_opponent; ++o) M(ap, o) = m.R(s, a, o) + Q(sp, ap, o);
        acc += p * solve_maximin(M).value;
      }
      for (int o = 0; o < m.n_opponent; ++o) out(s, a, o) = acc - f_value;
    }
  return out;
}

QTable apply_T_average_per_column(const TabularModel& m, const QTable& Q, double f_value) {
  if (m.criterion != Criterion::average)
    throw std::invalid_argument("apply_T_average_per_column: criterion mismatch");
  QTable out(m.n_states, m.n_actions, m.n_opponent);
  GameMatrix M(m.n_actions, m.n_opponent);
  for (int s = 0; s < m.n_states; ++s)
    for (int a = 0; a < m.n_actions; ++a) {
      std::vector<double> acc(m.n_opponent, 0.0);
      for (int sp = 0; sp < m.n_states; ++sp) {
        double p = m.P(s, a, sp);
        if (p <= 0.0) continue;
        for (int ap = 0; ap < m.n_actions; ++ap)
          for (int o = 0; o < m.n_opponent; ++o) M(ap, o) = m.R(s, a, o) + Q(sp, ap, o);
        MatrixGameSolution g = solve_maximin(M);
        for (int o = 0; o < m.n_opponent; ++o) {
          double e = 0.0;
          for (int ap = 0; ap < m.n_actions; ++ap) e += g.row_strategy[ap] * Q(sp, ap, o);
          acc[o] += p * e;
        }
      }
      for (int o = 0; o < m.n_opponent; ++o) out(s, a, o) = m.R(s, a, o) + acc[o] - f_value;
    }
  return out;
}

std::vector<double> stationary_distribution(const Tensor3<double>& P, const MixedPolicy& pi) {
  const int n = P.d0;
  // rows: (P_pi^T - I) mu = 0 with the last equation replaced by sum(mu) = 1
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  std::vector<double> b(n, 0.0);
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < n; ++s) {
      double p = 0.0;
      for (int a = 0; a < P.d1; ++a) p += pi(s, a) * P(s, a, t);
      A[t][s] = p - (s == t ? 1.0 : 0.0);
    }
  for (int s = 0; s < n; ++s) A[n - 1][s] = 1.0;
  b[n - 1] = 1.0;
  std::vector<double> mu = gauss_solve(std::move(A), std::move(b));
  for (double& x : mu) x = std::max(x, 0.0);
  double sum = 0.0;
  for (double x : mu) sum += x;
  for (double& x : mu) x /= sum;
  return mu;
}

AverageSolution rvi_average(const TabularModel& m, double tol, int max_sweeps) {
  const double eta = 0.5;
  QTable Q(m.n_states, m.n_actions, m.n_opponent);
  int it = 0;
  for (; it < max_sweeps; ++it) {
    QTable T = apply_T_average_per_column(m, Q, f_mean(Q));
    QTable next = Q;
    for (std::size_t i = 0; i < Q.v.size(); ++i) next.v[i] = (1.0 - eta) * Q.v[i] + eta * T.v[i];
    double d = span_diff(next, Q);
    double dsup = sup_diff(next, Q);
    Q = std::move(next);
    if (d <= tol && dsup <= tol) break;  // span for shape, sup to pin the f-anchored level
  }
  if (it >= max_sweeps) throw IterationBudgetExceeded("rvi_average: no convergence within sweep budget");

  AverageSolution sol;
  sol.iterations = it + 1;
  sol.Q_star = Q;
  sol.policy = maximin_policy(Q);
  sol.H_star.assign(std::size_t(m.n_states) * m.n_opponent, 0.0);
  for (int s = 0; s < m.n_states; ++s) {
    std::vector<double> e = expected_q(Q, s, sol.policy);
    for (int o = 0; o < m.n_opponent; ++o) sol.H_star[std::size_t(s) * m.n_opponent + o] = e[o];
  }
  // exact per-column gain of the maximin policy: the opponent column never
  // affects the chain, so one stationary distribution serves every o
  std::vector<double> mu = stationary_distribution(m.P, sol.policy);
  sol.v_star.assign(m.n_opponent, 0.0);
  for (int o = 0; o < m.n_opponent; ++o) {
    double v = 0.0;
    for (int s = 0; s < m.n_states; ++s)
      for (int a = 0; a < m.n_actions; ++a) v += mu[s] * sol.policy(s, a) * m.R(s, a, o);
    sol.v_star[o] = v;
  }
  return sol;
}

CmdpLpResult cmdp_lp_discounted(const ConstrainedProblem& p) {
  if (p.criterion != Criterion::discounted)
    throw std::invalid_argument("cmdp_lp_discounted: criterion mismatch");
  const int ns = p.n_states, na = p.n_actions;
  const int nv = ns * na;
  const double g = p.gamma;

  LpProblem lp;
  lp.n = nv;
  lp.c.assign(nv, 0.0);
  if (p.objective)
    for (int i = 0; i < nv; ++i) lp.c[i] = (*p.objective)[i] / (1.0 - g);

  auto row = [&](int s, int a) { return std::size_t(s) * na + a; };
  // flow conservation, as <= and >= pairs
  for (int t = 0; t < ns; ++t) {
    std::vector<double> coef(nv, 0.0);
    for (int a = 0; a < na; ++a) coef[row(t, a)] += 1.0;
    for (int s = 0; s < ns; ++s)
      for (int a = 0; a < na; ++a) coef[row(s, a)] -= g * p.P(s, a, t);
    const double rhs = (1.0 - g) * p.mu0[t];
    lp.A.push_back(coef);
    lp.b.push_back(rhs);
    for (double& c : coef) c = -c;
    lp.A.push_back(std::move(coef));
    lp.b.push_back(-rhs);
  }
  // constraint values >= 0
  for (const auto& r : p.constraints) {
    std::vector<double> coef(nv);
    for (int i = 0; i < nv; ++i) coef[i] = -r[i] / (1.0 - g);
    lp.A.push_back(std::move(coef));
    lp.b.push_back(0.0);
  }

  LpResult r = simplex_solve(lp);
  CmdpLpResult out;
  if (r.status == LpResult::Status::unbounded)
    throw std::runtime_error("cmdp_lp_discounted: unbounded objective (rewards should be bounded)");
  if (r.status != LpResult::Status::optimal) return out;  // feasible=false

  out.feasible = true;
  out.value = r.objective;
  out.occupancy = r.x;
  out.policy = MixedPolicy(ns, na, 0.0);
  for (int s = 0; s < ns; ++s) {
    double tot = 0.0;
    for (int a = 0; a < na; ++a) tot += r.x[row(s, a)];
    for (int a = 0; a < na; ++a) out.policy(s, a) = tot > 1e-12 ? r.x[row(s, a)] / tot : 1.0 / na;
  }
  return out;
}

double feasibility_value(const TabularModel& game, int s0) {
  if (game.criterion == Criterion::discounted) {
    auto [Q, pi] = fixed_point_discounted(game, 1e-9);
    std::vector<double> e = expected_q(Q, s0, pi);
    return *std::min_element(e.begin(), e.end());
  }
  AverageSolution sol = rvi_average(game, 1e-9);
  return *std::min_element(sol.v_star.begin(), sol.v_star.end());
}

}  // namespace mbg
