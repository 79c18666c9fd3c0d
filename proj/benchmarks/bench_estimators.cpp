#include <benchmark/benchmark.h>

#include "phasegbs/clicks.hpp"
#include "phasegbs/network.hpp"
#include "phasegbs/oracles.hpp"
#include "phasegbs/parallel.hpp"
#include "phasegbs/quadrature.hpp"

using namespace phasegbs;

namespace {

// One sub-ensemble of 1000 positive-P input samples.
void BM_InputBlock(benchmark::State& state) {
  const auto modes = static_cast<std::size_t>(state.range(0));
  const SqueezerSpec spec = SqueezerSpec::uniform(modes, modes / 2, 1.0);
  std::size_t index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_input_block(spec, Ordering::positive_p(), 7, index++, 1000));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_InputBlock)->Arg(16)->Arg(100)->Arg(1024);

// Total-count distribution through a Haar network, 10 sub-ensembles of 1000.
void BM_TotalCount(benchmark::State& state) {
  set_thread_count(1);
  const auto modes = static_cast<std::size_t>(state.range(0));
  const NetworkSampler sampler(SqueezerSpec::uniform(modes, modes / 2, 1.0),
                               Ordering::positive_p(), random_unitary(modes, 3), 11);
  const auto source = sampler.source({10, 1000});
  const auto partition = GroupPartition::single(modes);
  for (auto _ : state) benchmark::DoNotOptimize(grouped_probability(source, partition));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_TotalCount)->Arg(16)->Arg(100)->Unit(benchmark::kMillisecond);

// Four-way grouped distribution, tensor of 11^4 bins.
void BM_FourWayGrouping(benchmark::State& state) {
  set_thread_count(1);
  const NetworkSampler sampler(SqueezerSpec::uniform(40, 40, 1.0, 1.0), Ordering::positive_p(),
                               random_unitary(40, 5), 13);
  const auto source = sampler.source({4, 1000});
  const std::vector<std::size_t> sizes{10, 10, 10, 10};
  const auto partition = GroupPartition::sequential(sizes, 40);
  for (auto _ : state) benchmark::DoNotOptimize(grouped_probability(source, partition));
  state.SetItemsProcessed(state.iterations() * 4000);
}
BENCHMARK(BM_FourWayGrouping)->Unit(benchmark::kMillisecond);

void BM_Witness(benchmark::State& state) {
  set_thread_count(1);
  const auto modes = static_cast<std::size_t>(state.range(0));
  const NetworkSampler sampler(epr_chain_input_spec(modes, 3.0), Ordering::wigner(),
                               build_entanglement_unitary(modes), 17);
  const auto source = sampler.source({10, 1000});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_witness(source, modes));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Witness)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ExactPatterns(benchmark::State& state) {
  const auto modes = static_cast<std::size_t>(state.range(0));
  const auto moments = output_gaussian_moments(SqueezerSpec::uniform(modes, modes / 2, 1.0),
                                               random_unitary(modes, 19));
  for (auto _ : state) benchmark::DoNotOptimize(exact_pattern_probabilities(moments));
}
BENCHMARK(BM_ExactPatterns)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
