#pragma once

#include <vector>

namespace mbg {

/// maximize c.x  subject to  A x <= b, x >= 0.
/// Equality rows are expressed by callers as two opposing inequalities.
struct LpProblem {
  int n = 0;                            ///< number of structural variables
  std::vector<double> c;                ///< length n
  std::vector<std::vector<double>> A;   ///< m rows, each length n
  std::vector<double> b;                ///< length m, any sign
};

struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  double objective = 0.0;
  std::vector<double> x;     ///< length n
  std::vector<double> dual;  ///< length m, >= 0, reduced costs of row slacks
};

/// Dense two-phase simplex with Bland's rule (anti-cycling, deterministic
/// tie-breaking). Sized for the tiny LPs of this project.
LpResult simplex_solve(const LpProblem& lp);

}  // namespace mbg
