#include <benchmark/benchmark.h>

#include "qil/classifier.hpp"
#include "qil/decomposition.hpp"
#include "qil/defect.hpp"
#include "qil/random_instances.hpp"

namespace {

void BM_BetaQn(benchmark::State& state) {
  qil::InstanceGenerator gen(1);
  const qil::OperatorMatrix t = gen.generic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qil::beta_qn(t, 4, 3).residual);
}
BENCHMARK(BM_BetaQn)->Arg(2)->Arg(6)->Arg(16)->Arg(64);

void BM_Delta(benchmark::State& state) {
  qil::InstanceGenerator gen(2);
  const auto d = static_cast<std::size_t>(state.range(0));
  const qil::OperatorMatrix t = gen.generic(d);
  const qil::Vector x = gen.random_vector(d);
  for (auto _ : state) benchmark::DoNotOptimize(qil::delta(t, 4, 3, x));
}
BENCHMARK(BM_Delta)->Arg(6)->Arg(64);

void BM_MinimalProfile(benchmark::State& state) {
  qil::InstanceGenerator gen(3);
  const qil::QuasiInstance q = gen.quasi_instance(4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(qil::minimal_profile(q.t, 5, 3).staircase.size());
}
BENCHMARK(BM_MinimalProfile);

void BM_SimilaritySplit(benchmark::State& state) {
  qil::InstanceGenerator gen(4);
  const auto d = static_cast<std::size_t>(state.range(0));
  const qil::QuasiInstance q = gen.quasi_instance(d - 2, 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(qil::similarity_split(q.t, q.n).residual);
}
BENCHMARK(BM_SimilaritySplit)->Arg(6)->Arg(32);

void BM_MultinomialIdentity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qil::multinomial_identity_check(4, 4, 3));
}
BENCHMARK(BM_MultinomialIdentity);

}  // namespace

BENCHMARK_MAIN();
