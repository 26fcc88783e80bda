#include "mbg/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mbg/simplex.hpp"

namespace mbg {

namespace {

// Positive-shifted column program: max sum(y) s.t. M'y <= 1 (per row), y >= 0,
// where M' = M + shift > 0. Game value v' = 1/sum(y); column mixture q = v' y;
// row mixture from the row duals p_a = v' dual_a. The all-slack basis is
// feasible, so no phase-1 work ever happens here.
MatrixGameSolution solve_game(const GameMatrix& M) {
  if (M.rows < 1 || M.cols < 1) throw std::invalid_argument("solve_maximin: empty matrix");
  double lo = M.v[0];
  for (double x : M.v) {
    if (!std::isfinite(x)) throw std::invalid_argument("solve_maximin: non-finite input");
    lo = std::min(lo, x);
  }
  const double shift = 1.0 - lo;

  LpProblem lp;
  lp.n = M.cols;
  lp.c.assign(M.cols, 1.0);
  lp.A.assign(M.rows, std::vector<double>(M.cols));
  lp.b.assign(M.rows, 1.0);
  for (int a = 0; a < M.rows; ++a)
    for (int o = 0; o < M.cols; ++o) lp.A[a][o] = M(a, o) + shift;

  LpResult r = simplex_solve(lp);
  // sum(y) >= 1/max(M') > 0 is always attainable and bounded; anything else is
  // a solver defect, not an input condition.
  if (r.status != LpResult::Status::optimal || r.objective <= 0.0)
    throw std::runtime_error("solve_maximin: simplex failed");

  const double vshift = 1.0 / r.objective;
  MatrixGameSolution sol;
  sol.value = vshift - shift;
  sol.dual_strategy.assign(M.cols, 0.0);
  for (int o = 0; o < M.cols; ++o) sol.dual_strategy[o] = r.x[o] * vshift;
  sol.row_strategy.assign(M.rows, 0.0);
  double psum = 0.0;
  for (int a = 0; a < M.rows; ++a) {
    sol.row_strategy[a] = r.dual[a] * vshift;
    psum += sol.row_strategy[a];
  }
  for (double& p : sol.row_strategy) p /= psum;  // absorb roundoff
  double qsum = 0.0;
  for (double q : sol.dual_strategy) qsum += q;
  for (double& q : sol.dual_strategy) q /= qsum;

  const double tol = 1e-9 * std::max(1.0, std::abs(sol.value));
  for (int o = 0; o < M.cols; ++o) {
    double pay = 0.0;
    for (int a = 0; a < M.rows; ++a) pay += sol.row_strategy[a] * M(a, o);
    if (pay <= sol.value + tol) sol.tight_columns.push_back(o);
  }
  return sol;
}

}  // namespace

MatrixGameSolution solve_maximin(const GameMatrix& M) { return solve_game(M); }

std::pair<std::vector<double>, double> solve_dual(const GameMatrix& M) {
  MatrixGameSolution sol = solve_game(M);
  return {sol.dual_strategy, sol.value};
}

}  // namespace mbg
