#include <benchmark/benchmark.h>

#include <random>

#include "mbg/environments.hpp"
#include "mbg/learner_average.hpp"
#include "mbg/learner_discounted.hpp"
#include "mbg/matrix_game.hpp"
#include "mbg/oracle.hpp"
#include "mbg/rng.hpp"

namespace {

using namespace mbg;

GameMatrix random_game(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  GameMatrix m(rows, cols);
  for (auto& x : m.v) x = unif(rng);
  return m;
}

void bm_solve_maximin(benchmark::State& state) {
  const int rows = int(state.range(0)), cols = int(state.range(1));
  GameMatrix m = random_game(rows, cols, 42);
  for (auto _ : state) benchmark::DoNotOptimize(solve_maximin(m));
}
BENCHMARK(bm_solve_maximin)->Args({2, 2})->Args({20, 3})->Args({20, 10})->Args({50, 50});

void bm_discounted_learner_step(benchmark::State& state) {
  TabularModel game = assemble_game(build_queue());
  DiscountedLearner learner(game, ExploreSchedule{}, derive_seed(1, stream::learner));
  for (auto _ : state) learner.step();
}
BENCHMARK(bm_discounted_learner_step);

void bm_average_learner_step(benchmark::State& state) {
  TabularModel game = assemble_game(build_static_example(StaticExample::example2));
  game.criterion = Criterion::average;
  AverageLearner learner(game, ExploreSchedule{}, derive_seed(1, stream::learner));
  for (auto _ : state) learner.step();
}
BENCHMARK(bm_average_learner_step);

void bm_fixed_point_discounted(benchmark::State& state) {
  TabularModel game = assemble_game(build_queue());
  for (auto _ : state) benchmark::DoNotOptimize(fixed_point_discounted(game, 1e-6));
}
BENCHMARK(bm_fixed_point_discounted)->Unit(benchmark::kMillisecond);

void bm_rvi_average(benchmark::State& state) {
  TabularModel game = assemble_game(build_static_example(StaticExample::example2));
  game.criterion = Criterion::average;
  for (auto _ : state) benchmark::DoNotOptimize(rvi_average(game, 1e-8));
}
BENCHMARK(bm_rvi_average)->Unit(benchmark::kMillisecond);

void bm_cmdp_lp_queue(benchmark::State& state) {
  ConstrainedProblem queue = build_queue();
  for (auto _ : state) benchmark::DoNotOptimize(cmdp_lp_discounted(queue));
}
BENCHMARK(bm_cmdp_lp_queue)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
