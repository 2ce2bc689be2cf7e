#include "blockboot/bootstrap.hpp"
#include "blockboot/cvm.hpp"
#include "blockboot/kernels.hpp"
#include "blockboot/random.hpp"
#include "blockboot/vmstat.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace blockboot;

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
    Stream rng(seed);
    std::vector<double> xs(n);
    for (double& x : xs) x = rng.normal();
    return xs;
}

void BM_VStatistic(benchmark::State& state) {
    const auto xs = normals(static_cast<std::size_t>(state.range(0)), 1);
    const auto h = gaussian_kernel(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(v_statistic(xs, h));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_VStatistic)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000)->Complexity(benchmark::oNSquared);

void BM_VStatReplicate(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto xs = normals(n, 2);
    const auto plan = block_length_schedule(n);
    const VStatBootstrap engine(xs, plan, product_kernel());
    Stream rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(engine.replicate(draw_block_choices(plan, rng)));
}
BENCHMARK(BM_VStatReplicate)->Arg(500)->Arg(2000)->Arg(8000);

void BM_CvmReplicate(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Stream rng(4);
    std::vector<double> xs(n);
    for (double& x : xs) x = rng.uniform01();
    const auto plan = block_length_schedule(n);
    const auto spec = make_cvm_spec(NullDistribution::parse("uniform"), CvmWeight::unit, 2 * n, xs);
    const CvmBootstrap engine(xs, plan, spec);
    for (auto _ : state) benchmark::DoNotOptimize(engine.replicate(draw_block_choices(plan, rng)));
}
BENCHMARK(BM_CvmReplicate)->Arg(500)->Arg(2000)->Arg(8000);

}  // namespace

BENCHMARK_MAIN();
