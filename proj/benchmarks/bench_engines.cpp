#include <benchmark/benchmark.h>

#include "geospan/connectivity_engine.hpp"
#include "geospan/spanner_engine.hpp"
#include "geospan/workload.hpp"

using namespace geospan;

namespace {

Workload make_workload(double psi, int n, std::uint64_t seed) {
    GenerateParams params;
    params.seed = seed;
    params.n = n;
    params.psi = psi;
    params.churn = 0.3;
    return generate_workload(params);
}

void replay_spanner(SpannerEngine& engine, const Workload& w) {
    for (const WorkloadOp& op : w.ops) {
        if (op.insert) {
            engine.insert(op.shape);
        } else {
            engine.delete_shape(op.id);
        }
    }
}

void BM_SpannerUpdates(benchmark::State& state) {
    const double psi = double(state.range(0));
    const auto mode = state.range(1) == 0 ? SpaceMode::Big : SpaceMode::Small;
    const Workload w = make_workload(psi, 80, 11);
    for (auto _ : state) {
        SpannerConfig cfg;
        cfg.eps_user = 0.5;
        cfg.psi = psi;
        cfg.mode = mode;
        SpannerEngine engine(cfg);
        replay_spanner(engine, w);
        benchmark::DoNotOptimize(engine.stats().edge_count);
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(w.ops.size()));
}

void BM_ConnectivityUpdates(benchmark::State& state) {
    const double psi = double(state.range(0));
    const Workload w = make_workload(psi, 80, 13);
    for (auto _ : state) {
        ConnectivityConfig cfg;
        cfg.psi = psi;
        ConnectivityEngine engine(cfg);
        for (const WorkloadOp& op : w.ops) {
            if (op.insert) {
                engine.insert(op.shape);
            } else {
                engine.delete_shape(op.id);
            }
        }
        benchmark::DoNotOptimize(engine.size());
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(w.ops.size()));
}

// The star configuration: deleting and re-inserting the hub touches a
// number of spanner edges that grows quadratically in psi.
void BM_StarHubChurn(benchmark::State& state) {
    const double psi = double(state.range(0));
    SpannerConfig cfg;
    cfg.eps_user = 0.5;
    cfg.psi = psi;
    cfg.mode = SpaceMode::Big;
    SpannerEngine engine(cfg);
    const double cx = engine.tree().box().side / 2.0;
    Shape hub;
    hub.id = 1;
    hub.kind = ShapeKind::Disk;
    hub.dim = 2;
    hub.center = {cx, cx};
    hub.extent = psi / 2.0;
    ShapeId next = 2;
    const double reach = psi / 2.0 + 2.0;
    for (double dx = -reach; dx <= reach; dx += 5.0) {
        for (double dy = -reach; dy <= reach; dy += 5.0) {
            if (dx * dx + dy * dy > reach * reach) continue;
            Shape s;
            s.id = next++;
            s.kind = ShapeKind::Disk;
            s.dim = 2;
            s.center = {cx + dx, cx + dy};
            s.extent = 2.0;
            engine.insert(s);
        }
    }
    engine.insert(hub);
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.delete_shape(hub.id).size());
        benchmark::DoNotOptimize(engine.insert(hub).size());
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * 2);
}

}  // namespace

BENCHMARK(BM_SpannerUpdates)->Args({8, 0})->Args({8, 1})->Args({16, 0})->Args({16, 1})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConnectivityUpdates)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StarHubChurn)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
