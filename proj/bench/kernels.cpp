#include <benchmark/benchmark.h>

#include <numeric>

#include "mixkit/lpp.hpp"
#include "mixkit/maps.hpp"
#include "mixkit/measure.hpp"
#include "mixkit/sft.hpp"

using namespace mixkit;

namespace {

const TransitionMatrix full3 = TransitionMatrix::full_shift(3);
const ToralAutomorphism cat({{{2, 1}, {1, 1}}});

template <auto Kernel>
void cycles(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(full3, n, 1'000'000));
}

template <auto Kernel>
void toral_points(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(cat, n, 1'000'000));
}

template <auto Kernel>
void witnesses(benchmark::State& state) {
  const TransitionMatrix a({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  const auto n_max = static_cast<std::size_t>(state.range(0));
  const lpp::WitnessFactory factory(a, 3, n_max);
  std::vector<std::size_t> periods(n_max);
  std::iota(periods.begin(), periods.end(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(factory, periods));
}

template <auto Kernel>
void distances(benchmark::State& state) {
  const auto family = cylinder_family(2, 6);
  const Measure target = bernoulli_measure({0.5, 0.5});
  std::vector<Measure> candidates;
  for (const auto& w : sft::enumerate_cycles(TransitionMatrix::full_shift(2), static_cast<std::size_t>(state.range(0)),
                                             100'000).cycles)
    candidates.emplace_back(cycle_measure(w.states));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(candidates, target, family));
  state.counters["candidates"] = static_cast<double>(candidates.size());
}

}  // namespace

BENCHMARK(cycles<sft::enumerate_cycles_serial>)->Name("enumerate_cycles/serial")->Arg(10)->Arg(12);
BENCHMARK(cycles<sft::enumerate_cycles>)->Name("enumerate_cycles/openmp")->Arg(10)->Arg(12);
BENCHMARK(toral_points<toral_fixed_points_serial>)->Name("toral_fixed_points/serial")->Arg(12)->Arg(14);
BENCHMARK(toral_points<toral_fixed_points>)->Name("toral_fixed_points/openmp")->Arg(12)->Arg(14);
BENCHMARK(witnesses<lpp::witness_scan_serial>)->Name("witness_scan/serial")->Arg(200);
BENCHMARK(witnesses<lpp::witness_scan>)->Name("witness_scan/openmp")->Arg(200);
BENCHMARK(distances<distance_scan_serial>)->Name("distance_scan/serial")->Arg(12);
BENCHMARK(distances<distance_scan>)->Name("distance_scan/openmp")->Arg(12);

BENCHMARK_MAIN();
