#include <benchmark/benchmark.h>

#include "magiclab/channels.hpp"
#include "magiclab/measures.hpp"
#include "magiclab/phase_space.hpp"
#include "magiclab/random.hpp"
#include "magiclab/simulator.hpp"

namespace {

using namespace magiclab;

void BM_StateWigner(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const Operator rho = random_state(3, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(wigner_of_state(rho).total());
}
BENCHMARK(BM_StateWigner)->DenseRange(1, 5);

void BM_ChannelWigner(benchmark::State& state) {
  const Channel c = state.range(0) == 1 ? t_gate() : state.range(0) == 2 ? tensor(t_gate(), t_gate()) : ccx();
  for (auto _ : state) benchmark::DoNotOptimize(wigner_of_channel(c).values().data());
}
BENCHMARK(BM_ChannelWigner)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_ChannelThauma(benchmark::State& state) {
  Rng rng(2);
  const Channel c = random_channel(3, 1, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(max_thauma_channel(c).log2_value);
}
BENCHMARK(BM_ChannelThauma)->Unit(benchmark::kMillisecond);

void BM_StateThauma(benchmark::State& state) {
  const Operator t = state_library("T");
  for (auto _ : state) benchmark::DoNotOptimize(max_thauma_state(t).log2_value);
}
BENCHMARK(BM_StateThauma)->Unit(benchmark::kMillisecond);

void BM_Sampler(benchmark::State& state) {
  Circuit c;
  c.n = 2;
  c.initial = {state_library("+"), state_library("0")};
  for (int l = 0; l < state.range(0); ++l) {
    c.add(t_gate(), {0});
    c.add(unitary_channel(3, 2, csum_matrix(3)), {0, 1});
  }
  SamplerOptions opt;
  opt.samples = 100000;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate(c, 0.1, 0.1, 1, opt).estimate);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opt.samples));
}
BENCHMARK(BM_Sampler)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
