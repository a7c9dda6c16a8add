#include <benchmark/benchmark.h>

#include "cntpuf/analysis.hpp"
#include "cntpuf/scenario.hpp"

namespace {

using namespace cntpuf;

const Scenario& default_scenario() {
  static const Scenario scenario;
  return scenario;
}

const Crossbar& default_board() {
  static const Crossbar board = default_scenario().build();
  return board;
}

void BM_BuildCrossbar(benchmark::State& state) {
  const ClassMix mix;
  for (auto _ : state)
    benchmark::DoNotOptimize(build_crossbar(mix, 12, 12, 7));
}
BENCHMARK(BM_BuildCrossbar);

void BM_EvaluateScheme(benchmark::State& state, SchemeKind kind, bool noisy) {
  const Crossbar& board = default_board();
  const BiasScheme scheme = make_bias_scheme(kind, 5, 7, 12, 12);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto noise = noisy ? std::optional<std::uint64_t>(++seed) : std::nullopt;
    benchmark::DoNotOptimize(evaluate_scheme(board, scheme, noise));
  }
}
BENCHMARK_CAPTURE(BM_EvaluateScheme, regular_noiseless, SchemeKind::Regular, false);
BENCHMARK_CAPTURE(BM_EvaluateScheme, regular_noisy, SchemeKind::Regular, true);
BENCHMARK_CAPTURE(BM_EvaluateScheme, drain_leak_noisy, SchemeKind::DrainLeak, true);
BENCHMARK_CAPTURE(BM_EvaluateScheme, nonsel_leak_noisy, SchemeKind::NonSelLeak, true);

void BM_ReadResponse(benchmark::State& state) {
  const Scenario& scenario = default_scenario();
  const Crossbar& board = default_board();
  const ThresholdRule rule = scenario.threshold_rule();
  for (auto _ : state)
    benchmark::DoNotOptimize(read_response(board, rule, scenario.measure_params(),
                                           scenario.readout_repetitions,
                                           scenario.readout_seed(0)));
}
BENCHMARK(BM_ReadResponse);

void BM_AttackTrace(benchmark::State& state) {
  const Scenario& scenario = default_scenario();
  const Crossbar& board = default_board();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        run_attack_trace(board, SchemeKind::DrainLeak, scenario.measure_params(),
                         scenario.repetitions,
                         scenario.attack_seed(SchemeKind::DrainLeak)));
}
BENCHMARK(BM_AttackTrace);

void BM_LearnThreshold(benchmark::State& state) {
  const Scenario& scenario = default_scenario();
  const AttackTrace trace = run_attack_trace(
      default_board(), SchemeKind::DrainLeak, scenario.measure_params(),
      scenario.repetitions, scenario.attack_seed(SchemeKind::DrainLeak));
  const std::vector<double> means = cell_mean_magnitudes(trace);
  for (auto _ : state) benchmark::DoNotOptimize(learn_threshold(means));
}
BENCHMARK(BM_LearnThreshold);

}  // namespace

BENCHMARK_MAIN();
