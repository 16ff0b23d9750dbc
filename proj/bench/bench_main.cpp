#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "archprog/dataset.hpp"
#include "archprog/metrics.hpp"

using namespace archprog;

namespace {

std::vector<Vec3> cloud(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<Vec3> v(n);
    for (Vec3& p : v) p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    return v;
}

void BM_HausdorffBruteforce(benchmark::State& st) {
    const auto a = cloud(1, static_cast<std::size_t>(st.range(0))), b = cloud(2, static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(hausdorff_bruteforce(a, b));
}

void BM_HausdorffKdSerial(benchmark::State& st) {
    const auto a = cloud(1, static_cast<std::size_t>(st.range(0))), b = cloud(2, static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(hausdorff(a, b, Exec::Serial));
}

void BM_HausdorffKdParallel(benchmark::State& st) {
    const auto a = cloud(1, static_cast<std::size_t>(st.range(0))), b = cloud(2, static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(hausdorff(a, b, Exec::Parallel));
}

// Record synthesis, one thread vs the OpenMP team.
void synth_batch(benchmark::State& st, bool parallel) {
    DatasetConfig cfg;
    cfg.synth.seed = 3;
    const int n = static_cast<int>(st.range(0));
    std::vector<std::size_t> points(static_cast<std::size_t>(n));
    for (auto _ : st) {
#pragma omp parallel for schedule(dynamic) if (parallel)
        for (int i = 0; i < n; ++i)
            points[static_cast<std::size_t>(i)] = synth_sample(cfg, static_cast<std::size_t>(i)).cloud.points.size();
        benchmark::DoNotOptimize(points.data());
    }
    st.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}

void BM_SynthSerial(benchmark::State& st) { synth_batch(st, false); }
void BM_SynthParallel(benchmark::State& st) { synth_batch(st, true); }

} // namespace

BENCHMARK(BM_HausdorffBruteforce)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HausdorffKdSerial)->Arg(1000)->Arg(4000)->Arg(16000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HausdorffKdParallel)->Arg(1000)->Arg(4000)->Arg(16000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SynthSerial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SynthParallel)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
