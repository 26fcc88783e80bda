#pragma once

#include <vector>

namespace mbg {

/// Row-major payoff matrix for the row maximizer.
struct GameMatrix {
  int rows = 0, cols = 0;
  std::vector<double> v;

  GameMatrix() = default;
  GameMatrix(int r, int c, double fill = 0.0) : rows(r), cols(c), v(std::size_t(r) * c, fill) {}
  double& operator()(int r, int c) { return v[std::size_t(r) * cols + c]; }
  double operator()(int r, int c) const { return v[std::size_t(r) * cols + c]; }
};

struct MatrixGameSolution {
  std::vector<double> row_strategy;   ///< mixed maximin strategy, sums to 1
  double value = 0.0;                 ///< maximin game value
  std::vector<int> tight_columns;    ///< columns attaining the minimum payoff
  std::vector<double> dual_strategy;  ///< optimal opponent column mixture
};

/// Exact maximin: max over mixed p of min over columns o of sum_a p_a M(a,o).
/// Deterministic for fixed input (Bland pivoting).
MatrixGameSolution solve_maximin(const GameMatrix& M);

/// Opponent side: min over mixed q of max over rows a of sum_o q_o M(a,o).
/// Value equals solve_maximin by LP duality.
std::pair<std::vector<double>, double> solve_dual(const GameMatrix& M);

}  // namespace mbg
