#include <benchmark/benchmark.h>

#include <random>

#include "hah/bockstein.hpp"
#include "hah/fixtures.hpp"
#include "hah/matrix.hpp"
#include "hah/primitivization.hpp"

using namespace hah;

namespace {

void BM_LocalSmithForm(benchmark::State& state) {
  const Ring R = Ring::localized(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> dist(-9, 9);
  Matrix m(R, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = Scalar(R, dist(rng));
  for (auto _ : state) benchmark::DoNotOptimize(local_smith_form(m));
}
BENCHMARK(BM_LocalSmithForm)->Arg(8)->Arg(16)->Arg(32);

void BM_HomologyExample1(benchmark::State& state) {
  const int cap = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto h = fixtures::polynomial_exterior(3, 1, cap);
    const ChainComplex c = h.complex();
    for (int n = 1; n < cap; ++n) benchmark::DoNotOptimize(homology_at(c, n));
  }
}
BENCHMARK(BM_HomologyExample1)->Arg(12)->Arg(21);

void BM_JMapExample1(benchmark::State& state) {
  for (auto _ : state) {
    auto h = fixtures::polynomial_exterior(3, 1, 21);
    for (int n = 1; n <= 20; ++n) benchmark::DoNotOptimize(j_map_at(h, n));
  }
}
BENCHMARK(BM_JMapExample1)->Unit(benchmark::kMillisecond);

void BM_BocksteinTorsionPair(benchmark::State& state) {
  for (auto _ : state) {
    auto h = fixtures::torsion_pair(3, 9);
    Bockstein b(h.complex());
    benchmark::DoNotOptimize(b.pages(0, 8));
  }
}
BENCHMARK(BM_BocksteinTorsionPair)->Unit(benchmark::kMillisecond);

void BM_TrivializeSeeded(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    state.PauseTiming();
    std::mt19937_64 rng(++seed);
    ExtensionProblem pr = random_extension_problem(p, 12, rng);
    state.ResumeTiming();
    benchmark::DoNotOptimize(trivialize_extension(pr, PrimitivizationConfig::for_presentation(pr.base)));
  }
}
BENCHMARK(BM_TrivializeSeeded)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_PrimitivizeThreeGenerator(benchmark::State& state) {
  const int cap = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto h = fixtures::three_generator(5, 3, cap);
    benchmark::DoNotOptimize(primitivize(h, PrimitivizationConfig::for_presentation(h)));
  }
}
BENCHMARK(BM_PrimitivizeThreeGenerator)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
