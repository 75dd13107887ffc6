#include <benchmark/benchmark.h>

#include "rollergrasp/batch.hpp"

namespace {

using rollergrasp::AntipodalGrasp;

const std::vector<AntipodalGrasp>& sample() {
  static const auto grasps = rollergrasp::random_generic_grasps(4096, 7);
  return grasps;
}

std::vector<rollergrasp::MotionProblem> problems() {
  std::vector<rollergrasp::MotionProblem> out;
  for (const auto& g : sample()) {
    const rollergrasp::EnvContact table{g.midpoint() - 0.05 * g.reference_normal().vec(), g.reference_normal(), 0.2,
                                        rollergrasp::FrictionMode::NormalOnly};
    out.push_back({g, rollergrasp::Sphere{0.04}, {table},
                   rollergrasp::Twist(rollergrasp::Vec3::Zero(), 0.01 * g.reference_normal().vec(),
                                      rollergrasp::Frame::Stationary)});
  }
  return out;
}

void BM_AnalyzeSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rollergrasp::analyze_grasps_serial(sample()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sample().size()));
}

void BM_AnalyzeParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rollergrasp::analyze_grasps(sample()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sample().size()));
}

void BM_SolveSerial(benchmark::State& state) {
  const auto p = problems();
  for (auto _ : state) benchmark::DoNotOptimize(rollergrasp::solve_batch_serial(p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.size()));
}

void BM_SolveParallel(benchmark::State& state) {
  const auto p = problems();
  for (auto _ : state) benchmark::DoNotOptimize(rollergrasp::solve_batch(p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.size()));
}

BENCHMARK(BM_AnalyzeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnalyzeParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
