#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "okm/local_search.hpp"
#include "okm/online.hpp"

namespace {

using namespace okm;

std::vector<std::vector<double>> synth_points(int n, int dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dims));
    for (auto& p : pts) {
        for (double& x : p) x = static_cast<double>(rng() % 10000) / 100.0;
    }
    return pts;
}

void BM_EuclideanDistance(benchmark::State& state) {
    const auto space = MetricSpace::euclidean(synth_points(256, 10, 1));
    PointId u = 0, v = 128;
    for (auto _ : state) {
        benchmark::DoNotOptimize(space.distance(u, v));
        u = (u + 1) % 256;
        v = (v + 3) % 256;
    }
}
BENCHMARK(BM_EuclideanDistance);

void BM_LedgerInsert(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto space = MetricSpace::euclidean(synth_points(n + 1024, 10, 2));
    for (auto _ : state) {
        state.PauseTiming();
        Instance inst;
        inst.space = &space;
        for (int i = 0; i < n; ++i) inst.facilities.push_back(static_cast<PointId>(i));
        inst.k = 10;
        std::vector<int> medians;
        for (int i = 0; i < 10; ++i) medians.push_back(i);
        AssignmentLedger ledger(inst, medians, 1.0);
        state.ResumeTiming();
        for (int i = 0; i < 1024; ++i) {
            ledger.insert_client(static_cast<PointId>(n + i));
        }
    }
    state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_LedgerInsert)->Arg(64)->Arg(1024);

void BM_SwapScan(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto space = MetricSpace::euclidean(synth_points(n, 10, 3));
    Instance inst;
    inst.space = &space;
    for (int i = 0; i < n; ++i) {
        inst.facilities.push_back(static_cast<PointId>(i));
        inst.clients.push_back(static_cast<PointId>(i));
    }
    inst.k = 10;
    std::vector<int> medians;
    for (int i = 0; i < 10; ++i) medians.push_back(i);
    AssignmentLedger ledger(inst, medians, 5.0);
    const SearchParams params{1, 1e30, SwapStrategy::kFirstImprovement};  // never accepts
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_efficient_swap(ledger, params));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * 10);
}
BENCHMARK(BM_SwapScan)->Arg(256)->Arg(1024);

void BM_OnlineArrival(benchmark::State& state) {
    const int n = 1500;
    const auto pts = synth_points(n, 10, 4);
    const auto space = MetricSpace::euclidean(pts);
    OnlineConfig cfg;
    cfg.k = 10;
    cfg.z = 50;
    cfg.epsilon = 0.05;
    cfg.lazy_alpha = 0.2;
    cfg.setting = FacilityMode::kFEqualsC;
    for (auto _ : state) {
        OnlineEngine engine(cfg, space);
        for (int j = 0; j < n; ++j) engine.insert(static_cast<PointId>(j));
        benchmark::DoNotOptimize(engine.recourse().total());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_OnlineArrival)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
