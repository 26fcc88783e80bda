#include "mbg/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace mbg {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kOptTol = 1e-9;

// Tableau: rows 0..m-1 constraints, row m objective (reduced costs, maximize).
// Columns 0..total-1 variables, column `total` the rhs.
struct Tableau {
  int m, total;
  std::vector<double> t;  // (m+1) x (total+1)
  std::vector<int> basis;

  double& at(int r, int c) { return t[std::size_t(r) * (total + 1) + c]; }

  void pivot(int pr, int pc) {
    double inv = 1.0 / at(pr, pc);
    for (int c = 0; c <= total; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r <= m; ++r) {
      if (r == pr) continue;
      double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= total; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  // Bland: entering = lowest-index improving column among allowed ones,
  // leaving = min ratio, ties by lowest basis index.
  // Returns optimal / unbounded.
  enum class RunStatus { optimal, unbounded };
  RunStatus run(int allowed_cols) {
    while (true) {
      int pc = -1;
      for (int c = 0; c < allowed_cols; ++c)
        if (at(m, c) > kOptTol) {
          pc = c;
          break;
        }
      if (pc < 0) return RunStatus::optimal;
      int pr = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m; ++r) {
        double a = at(r, pc);
        if (a <= kPivotTol) continue;
        double ratio = at(r, total) / a;
        if (ratio < best - 1e-12 || (ratio < best + 1e-12 && (pr < 0 || basis[r] < basis[pr]))) {
          best = ratio;
          pr = r;
        }
      }
      if (pr < 0) return RunStatus::unbounded;
      pivot(pr, pc);
      basis[pr] = pc;
    }
  }
};

}  // namespace

LpResult simplex_solve(const LpProblem& lp) {
  const int n = lp.n;
  const int m = int(lp.A.size());
  LpResult res;

  int n_art = 0;
  for (double bi : lp.b)
    if (bi < 0.0) ++n_art;

  Tableau tab;
  tab.m = m;
  tab.total = n + m + n_art;
  tab.t.assign(std::size_t(m + 1) * (tab.total + 1), 0.0);
  tab.basis.assign(m, -1);

  int art = n + m;
  for (int r = 0; r < m; ++r) {
    double sign = lp.b[r] < 0.0 ? -1.0 : 1.0;
    for (int c = 0; c < n; ++c) tab.at(r, c) = sign * lp.A[r][c];
    tab.at(r, n + r) = sign;  // slack
    tab.at(r, tab.total) = sign * lp.b[r];
    if (sign < 0.0) {
      tab.at(r, art) = 1.0;
      tab.basis[r] = art++;
    } else {
      tab.basis[r] = n + r;
    }
  }

  if (n_art > 0) {
    // phase 1: maximize -sum(artificials); price out the artificial basis
    for (int c = n + m; c < tab.total; ++c) tab.at(m, c) = -1.0;
    for (int r = 0; r < m; ++r)
      if (tab.basis[r] >= n + m)
        for (int c = 0; c <= tab.total; ++c) tab.at(m, c) += tab.at(r, c);
    tab.run(tab.total);
    // rhs cell of the objective row holds -z; phase-1 optimum z* < 0 means
    // some artificial is stuck at a positive level
    if (tab.at(m, tab.total) > 1e-7) {
      res.status = LpResult::Status::infeasible;
      return res;
    }
    // drive zero-level artificials out of the basis where possible
    for (int r = 0; r < m; ++r) {
      if (tab.basis[r] < n + m) continue;
      for (int c = 0; c < n + m; ++c)
        if (std::abs(tab.at(r, c)) > kPivotTol) {
          tab.pivot(r, c);
          tab.basis[r] = c;
          break;
        }
    }
    for (int r = 0; r <= m; ++r)
      for (int c = n + m; c < tab.total; ++c) tab.at(r, c) = 0.0;  // forbid re-entry
  }

  // phase 2 objective row: reduced costs of maximize c.x
  for (int c = 0; c <= tab.total; ++c) tab.at(m, c) = 0.0;
  for (int c = 0; c < n; ++c) tab.at(m, c) = lp.c[c];
  for (int r = 0; r < m; ++r) {
    int bc = tab.basis[r];
    double cb = bc < n ? lp.c[bc] : 0.0;
    if (cb == 0.0) continue;
    for (int c = 0; c <= tab.total; ++c) tab.at(m, c) -= cb * tab.at(r, c);
  }

  if (tab.run(n + m) == Tableau::RunStatus::unbounded) {
    res.status = LpResult::Status::unbounded;
    return res;
  }

  res.status = LpResult::Status::optimal;
  res.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r)
    if (tab.basis[r] < n) res.x[tab.basis[r]] = tab.at(r, tab.total);
  res.objective = -tab.at(m, tab.total);
  res.dual.assign(m, 0.0);
  for (int r = 0; r < m; ++r) {
    double d = -tab.at(m, n + r);
    res.dual[r] = d > 0.0 ? d : 0.0;
  }
  return res;
}

}  // namespace mbg
