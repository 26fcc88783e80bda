#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mbg/matrix_game.hpp"

using namespace mbg;

namespace {

GameMatrix make(int rows, int cols, std::initializer_list<double> vals) {
  GameMatrix M(rows, cols);
  std::copy(vals.begin(), vals.end(), M.v.begin());
  return M;
}

double column_payoff(const GameMatrix& M, const std::vector<double>& p, int o) {
  double s = 0.0;
  for (int a = 0; a < M.rows; ++a) s += p[a] * M(a, o);
  return s;
}

/// Closed-form 2x2 equalizer when the optimum is interior.
double equalizing_p0(const GameMatrix& M) {
  const double den = M(0, 0) - M(0, 1) - M(1, 0) + M(1, 1);
  return (M(1, 1) - M(1, 0)) / den;
}

}  // namespace

TEST_CASE("matching pennies: value 0, uniform strategy") {
  auto sol = solve_maximin(make(2, 2, {1, -1, -1, 1}));
  CHECK(sol.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.row_strategy[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.row_strategy[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.tight_columns.size() == 2);
}

TEST_CASE("second-step table [[1,0],[0,0.5]]: p=(1/3,2/3), value 1/3") {
  auto sol = solve_maximin(make(2, 2, {1, 0, 0, 0.5}));
  CHECK(sol.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(sol.row_strategy[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(sol.row_strategy[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("single column reduces to the best row") {
  auto sol = solve_maximin(make(2, 1, {3, 7}));
  CHECK(sol.value == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(sol.row_strategy[0] == doctest::Approx(0.0));
  CHECK(sol.row_strategy[1] == doctest::Approx(1.0));
  CHECK(sol.tight_columns == std::vector<int>{0});
}

TEST_CASE("third-step table [[1,-5/18],[0,1/2]]: p=(9/32,23/32), value 9/32") {
  auto sol = solve_maximin(make(2, 2, {1.0, -5.0 / 18.0, 0.0, 0.5}));
  CHECK(sol.value == doctest::Approx(9.0 / 32.0).epsilon(1e-12));
  CHECK(sol.row_strategy[0] == doctest::Approx(9.0 / 32.0).epsilon(1e-12));
  CHECK(sol.row_strategy[1] == doctest::Approx(23.0 / 32.0).epsilon(1e-12));
}

TEST_CASE("dual of matching pennies: q=(0.5,0.5), value 0") {
  auto [q, w] = solve_dual(make(2, 2, {1, -1, -1, 1}));
  CHECK(w == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(q[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("dual puts all mass on a strictly dominant column") {
  // column 1 is strictly below column 0 in every row
  auto [q, w] = solve_dual(make(2, 2, {3, 1, 2, 0}));
  CHECK(q[0] == doctest::Approx(0.0));
  CHECK(q[1] == doctest::Approx(1.0));
  CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-finite or empty input is rejected") {
  GameMatrix bad(1, 1);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(solve_maximin(bad), std::invalid_argument);
  CHECK_THROWS_AS(solve_maximin(GameMatrix{}), std::invalid_argument);
  CHECK_THROWS_AS(solve_dual(bad), std::invalid_argument);
}

TEST_CASE("1000 random games: duality, sandwich, feasibility, certificates") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    GameMatrix M(dim(rng), dim(rng));
    for (auto& x : M.v) x = unif(rng);
    auto sol = solve_maximin(M);
    auto [q, w] = solve_dual(M);

    // primal/dual agreement
    CHECK(std::abs(sol.value - w) <= 1e-9);

    // pure-strategy sandwich
    double lo = -1e18, hi = 1e18;
    for (int a = 0; a < M.rows; ++a) {
      double rowmin = 1e18;
      for (int o = 0; o < M.cols; ++o) rowmin = std::min(rowmin, M(a, o));
      lo = std::max(lo, rowmin);
    }
    for (int o = 0; o < M.cols; ++o) {
      double colmax = -1e18;
      for (int a = 0; a < M.rows; ++a) colmax = std::max(colmax, M(a, o));
      hi = std::min(hi, colmax);
    }
    CHECK(sol.value >= lo - 1e-9);
    CHECK(sol.value <= hi + 1e-9);

    // primal feasibility and tight-column consistency
    double psum = 0.0;
    for (double p : sol.row_strategy) {
      CHECK(p >= -1e-12);
      psum += p;
    }
    CHECK(psum == doctest::Approx(1.0).epsilon(1e-9));
    for (int o = 0; o < M.cols; ++o) CHECK(column_payoff(M, sol.row_strategy, o) >= sol.value - 1e-9);
    REQUIRE_FALSE(sol.tight_columns.empty());
    for (int o : sol.tight_columns)
      CHECK(column_payoff(M, sol.row_strategy, o) <= sol.value + 1e-8 * std::max(1.0, std::abs(sol.value)));

    // dual certificate: every row payoff under q is at most the value
    for (int a = 0; a < M.rows; ++a) {
      double rp = 0.0;
      for (int o = 0; o < M.cols; ++o) rp += q[o] * M(a, o);
      CHECK(rp <= sol.value + 1e-9);
    }
  }
}

TEST_CASE("shift and scale equivariance with identical strategies") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    GameMatrix M(3, 3);
    for (auto& x : M.v) x = unif(rng);
    auto base = solve_maximin(M);

    const double r = unif(rng);
    GameMatrix Ms = M;
    for (auto& x : Ms.v) x += r;
    auto shifted = solve_maximin(Ms);
    CHECK(shifted.value == doctest::Approx(base.value + r).epsilon(1e-9));
    for (int a = 0; a < 3; ++a)
      CHECK(shifted.row_strategy[a] == doctest::Approx(base.row_strategy[a]).epsilon(1e-9));

    const double g = 0.25 + std::abs(unif(rng));
    GameMatrix Mg = M;
    for (auto& x : Mg.v) x *= g;
    auto scaled = solve_maximin(Mg);
    CHECK(scaled.value == doctest::Approx(g * base.value).epsilon(1e-9));
    for (int a = 0; a < 3; ++a)
      CHECK(scaled.row_strategy[a] == doctest::Approx(base.row_strategy[a]).epsilon(1e-8));
  }
}

TEST_CASE("2x2 games with interior optima match the closed-form equalizer") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  int interior = 0;
  for (int trial = 0; trial < 500; ++trial) {
    GameMatrix M(2, 2);
    for (auto& x : M.v) x = unif(rng);
    const double den = M(0, 0) - M(0, 1) - M(1, 0) + M(1, 1);
    if (std::abs(den) < 1e-6) continue;
    const double p0 = equalizing_p0(M);
    if (p0 <= 1e-3 || p0 >= 1.0 - 1e-3) continue;  // optimum on the boundary: no equalizer
    // interior equalizer must also dominate both pure strategies to be optimal
    const double veq = p0 * M(0, 0) + (1.0 - p0) * M(1, 0);
    const double v0 = std::min(M(0, 0), M(0, 1));
    const double v1 = std::min(M(1, 0), M(1, 1));
    if (veq < std::max(v0, v1) + 1e-9) continue;  // require a strictly interior optimum
    ++interior;
    auto sol = solve_maximin(M);
    CHECK(std::abs(sol.row_strategy[0] - p0) <= 1e-12);
    CHECK(std::abs(sol.value - veq) <= 1e-12);
  }
  CHECK(interior > 50);  // the filter must leave a meaningful sample
}

TEST_CASE("deterministic tie-breaking: identical input, identical output") {
  GameMatrix M = make(2, 2, {0, 0, 0, 0});
  auto a = solve_maximin(M);
  auto b = solve_maximin(M);
  CHECK(a.row_strategy == b.row_strategy);
  CHECK(a.tight_columns == b.tight_columns);
  CHECK(a.tight_columns.front() == 0);  // lexicographic pick at full tie
}
