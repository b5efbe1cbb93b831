#include <benchmark/benchmark.h>

#include <memory>

#include "gridlab/brouwer.hpp"
#include "gridlab/instances.hpp"
#include "gridlab/rng.hpp"
#include "gridlab/search.hpp"

using namespace gridlab;

static void BM_ValueAtConst(benchmark::State& state) {
  const StaircaseInstance inst = gen_const_staircase(state.range(0), 2, 2, 7);
  Rng rng(1);
  GridPoint p{1, 1};
  for (auto _ : state) {
    p[0] = 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(inst.grid_side)));
    p[1] = 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(inst.grid_side)));
    benchmark::DoNotOptimize(inst.value_at(p));
  }
}
BENCHMARK(BM_ValueAtConst)->Arg(64)->Arg(512)->Arg(4096);

static void BM_ValueAtPoly(benchmark::State& state) {
  const StaircaseInstance inst = gen_poly_staircase(125, 3, 0.5, 7);
  Rng rng(1);
  GridPoint p{1, 1, 1};
  for (auto _ : state) {
    for (int a = 0; a < 3; ++a) p[a] = 1 + static_cast<Coord>(rng.below(125));
    benchmark::DoNotOptimize(inst.value_at(p));
  }
}
BENCHMARK(BM_ValueAtPoly);

static void BM_FoldedSegmentContains(benchmark::State& state) {
  const GridPoint x{1, 1, 1};
  const GridPoint y{90, 40, 70};
  const FoldedSegment fs(x, y);
  Rng rng(3);
  for (auto _ : state) {
    GridPoint p{1 + static_cast<Coord>(rng.below(100)), 1 + static_cast<Coord>(rng.below(100)),
                1 + static_cast<Coord>(rng.below(100))};
    benchmark::DoNotOptimize(fs.contains(p));
  }
}
BENCHMARK(BM_FoldedSegmentContains);

static void BM_BoundaryEnumeration(benchmark::State& state) {
  const Cube c(GridPoint{1, 1}, GridPoint{state.range(0), state.range(0)});
  for (auto _ : state) {
    std::int64_t count = 0;
    c.for_each_boundary_point([&](const GridPoint&) { ++count; });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_BoundaryEnumeration)->Arg(64)->Arg(512);

static void BM_BoundaryBadCount(benchmark::State& state) {
  const DirectionField padded =
      pad_brouwer(gen_sink_field(state.range(0), 2, GridPoint{3, 4}));
  const Cube box = padded.shape.box();
  for (auto _ : state) benchmark::DoNotOptimize(boundary_bad_count(box, padded.eval));
}
BENCHMARK(BM_BoundaryBadCount)->Arg(16)->Arg(64);

static void BM_ConstRoundsTrial(benchmark::State& state) {
  for (auto _ : state) {
    auto inst = std::make_shared<StaircaseInstance>(gen_const_staircase(state.range(0), 2, 2, 5));
    ValueSession s = make_value_session(inst);
    benchmark::DoNotOptimize(const_rounds_ls(s, 2).queries_used);
  }
}
BENCHMARK(BM_ConstRoundsTrial)->Arg(64)->Arg(512);

BENCHMARK_MAIN();
