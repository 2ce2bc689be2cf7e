#include "blockboot/bootstrap.hpp"
#include "blockboot/hilbert.hpp"
#include "blockboot/random.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace blockboot;

GridFunction noise(const SpacePtr& space, Stream& rng) {
    std::vector<double> v(space->size());
    for (double& x : v) x = rng.normal();
    return {space, v};
}

void BM_InnerProduct(benchmark::State& state) {
    const auto space = GridSpace::uniform(0.0, 1.0, static_cast<std::size_t>(state.range(0)));
    Stream rng(1);
    const auto f = noise(space, rng);
    const auto g = noise(space, rng);
    for (auto _ : state) benchmark::DoNotOptimize(inner_product(f, g));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_InnerProduct)->RangeMultiplier(8)->Range(64, 32768);

void BM_MeanBootstrapFunctional(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto space = GridSpace::uniform(0.0, 1.0, 64);
    Stream rng(2);
    std::vector<double> values(n * space->size());
    for (double& x : values) x = rng.normal();
    const HilbertSample s(space, values);
    const auto plan = block_length_schedule(n);
    const BlockSums sums(s, plan);
    for (auto _ : state) {
        const auto choices = draw_block_choices(plan, rng);
        benchmark::DoNotOptimize(sums.mean_statistic(choices));
    }
}
BENCHMARK(BM_MeanBootstrapFunctional)->Arg(1000)->Arg(10000);

}  // namespace
