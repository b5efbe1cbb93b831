#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <memory>
#include <set>

#include "gridlab/instances.hpp"
#include "gridlab/rng.hpp"

using namespace gridlab;

TEST_CASE("ell schedule") {
  CHECK(ell_schedule(64, 2, 2) == std::vector<Coord>{64, 16});
  CHECK(ell_schedule(256, 3, 2) == std::vector<Coord>{256, 64});
  for (Coord n : {2, 7, 100, 1024})
    for (int d = 1; d <= 4; ++d)
      for (int k = 1; k <= 4; ++k) {
        const auto ells = ell_schedule(n, d, k);
        CHECK(ells.front() == n);
        for (std::size_t i = 1; i < ells.size(); ++i) {
          CHECK(ells[i] <= ells[i - 1]);
          CHECK(ells[i] >= 1);
        }
      }
}

TEST_CASE("constant-round staircase generation") {
  const StaircaseInstance inst = gen_const_staircase(64, 2, 2, 7);
  CHECK(inst.grid_side == 80);  // m = 64 + 16
  CHECK(inst.start() == GridPoint{1, 1});
  REQUIRE(inst.connecting.size() == 3);
  CHECK(corner_window(inst.connecting[0], 64).contains(inst.connecting[1]));
  CHECK(corner_window(inst.connecting[1], 16).contains(inst.connecting[2]));

  // k = 1: a single window draw from the full-side window.
  const StaircaseInstance one = gen_const_staircase(8, 2, 1, 3);
  CHECK(one.grid_side == 8);
  REQUIRE(one.connecting.size() == 2);
  CHECK(corner_window(one.start(), 8).contains(one.connecting[1]));

  // Distinct length-k staircase count for d=2, k=2, n=64.
  CHECK(64LL * 64 * 16 * 16 == (1LL << 20));
}

TEST_CASE("offset enumeration hits every staircase exactly once") {
  const std::vector<Coord> schedule{2, 2};
  std::set<std::vector<GridPoint>> seen;
  std::int64_t count = 0;
  for (Coord a0 = 0; a0 < 2; ++a0)
    for (Coord a1 = 0; a1 < 2; ++a1)
      for (Coord b0 = 0; b0 < 2; ++b0)
        for (Coord b1 = 0; b1 < 2; ++b1) {
          const StaircaseInstance s =
              const_staircase_from_offsets(schedule, 2, {{a0, a1}, {b0, b1}}, -1);
          seen.insert(s.connecting);
          ++count;
        }
  CHECK(count == 16);  // (2^2)^2 = prod ell_j^d
  CHECK(static_cast<std::int64_t>(seen.size()) == count);
}

TEST_CASE("staircase value function") {
  const StaircaseInstance inst = gen_const_staircase(16, 2, 2, 11);
  CHECK(inst.value_at(inst.start()) == 0);

  if (inst.path_length() > 0) {
    CHECK(inst.value_at(inst.walk_point(1)) == -1);
    // Values strictly decrease by one per step along the trace.
    for (std::int64_t i = 1; i < inst.path_length(); ++i)
      CHECK(inst.value_at(inst.walk_point(i)) == -i);
  }

  // A neighbor of the start that is off the path has value 1.
  const GridPoint off{1, 2};
  if (!inst.trace_index(off) && !(off == inst.end())) CHECK(inst.value_at(off) == 1);
}

namespace {

// Exhaustive local-minimum scan for small instances.
std::vector<GridPoint> all_local_minima(const StaircaseInstance& inst) {
  std::vector<GridPoint> out;
  const Cube grid = inst.shape().box();
  grid.for_each_point([&](const GridPoint& p) {
    const std::int64_t v = inst.value_at(p);
    for (const GridPoint& q : neighbors(p, grid))
      if (inst.value_at(q) < v) return;
    out.push_back(p);
  });
  return out;
}

}  // namespace

TEST_CASE("staircases have a unique local minimum") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const StaircaseInstance inst = gen_const_staircase(9, 2, 2, seed);  // m = 12
    const auto minima = all_local_minima(inst);
    REQUIRE(minima.size() == 1);
    CHECK(minima[0] == inst.unique_local_min());
    if (inst.end_sign < 0)
      CHECK(minima[0] == inst.end());
    else if (inst.path_length() > 1)
      CHECK(inst.value_at(minima[0]) == -(inst.path_length() - 1));
  }
}

TEST_CASE("polynomial-round walk parameters and structure") {
  const PolyParams pp = poly_params(64, 3, 0.5);
  CHECK(pp.ell == 16);
  CHECK(pp.m == 4);
  CHECK(pp.K == 16);

  const StaircaseInstance inst = gen_poly_staircase(64, 3, 0.5, 19);
  CHECK(inst.start() == GridPoint{1, 1, 1});
  CHECK(inst.connecting.size() == 17);
  CHECK(inst.grid_side == 64);

  // Window steps stay in W(x_{j-1}); every m-th step is a uniform resample.
  for (std::size_t j = 1; j < inst.connecting.size(); ++j) {
    if (static_cast<std::int64_t>(j) % pp.m == 0) continue;
    for (int a = 0; a < 3; ++a)
      CHECK(in_w1(inst.connecting[j - 1][a], inst.connecting[j][a], pp.ell, 64));
  }

  // Some seed resamples outside the window at step m (otherwise the draw
  // would not be uniform over the torus).
  bool found_escape = false;
  for (std::uint64_t seed = 0; seed < 64 && !found_escape; ++seed) {
    const StaircaseInstance s = gen_poly_staircase(64, 3, 0.5, seed);
    const GridPoint& a = s.connecting[static_cast<std::size_t>(pp.m) - 1];
    const GridPoint& b = s.connecting[static_cast<std::size_t>(pp.m)];
    for (int ax = 0; ax < 3; ++ax)
      if (!in_w1(a[ax], b[ax], pp.ell, 64)) found_escape = true;
  }
  CHECK(found_escape);

  CHECK_THROWS_AS(gen_poly_staircase(64, 2, 0.5, 1), DomainError);
  // Degenerate window after rounding (ell < 2).
  CHECK_THROWS_AS(gen_poly_staircase(8, 3, 1.4, 1), DomainError);
  CHECK_THROWS_AS(gen_poly_staircase(64, 3, 2.0, 1), DomainError);  // alpha >= d/2
}

TEST_CASE("poly trace keeps the largest index at self-intersections") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StaircaseInstance inst = gen_poly_staircase(27, 3, 0.5, seed);
    // Independent trace: walk segments and record max index per point.
    std::map<GridPoint, std::int64_t> expect;
    std::int64_t idx = 0;
    for (std::size_t j = 1; j < inst.connecting.size(); ++j) {
      FoldedSegment fs(inst.connecting[j - 1], inst.connecting[j], 27);
      fs.for_each([&](const GridPoint& p, std::int64_t) {
        ++idx;
        auto it = expect.find(p);
        if (it == expect.end() || it->second < idx) expect[p] = idx;
      });
    }
    CHECK(inst.path_length() == idx);
    for (const auto& [p, i] : expect) {
      if (p == inst.end()) continue;  // end value follows the sign rule
      CHECK(inst.value_at(p) == -i);
    }
  }
}

TEST_CASE("1d hard instance families") {
  const OneDHardInstance ls3 = gen_1d_hard(5, 3, OneDKind::local_search);
  CHECK(std::vector<std::int64_t>{ls3.value(1), ls3.value(2), ls3.value(3), ls3.value(4),
                                  ls3.value(5)} == std::vector<std::int64_t>{5, 4, 0, 4, 5});

  const OneDHardInstance ls1 = gen_1d_hard(5, 1, OneDKind::local_search);
  CHECK(std::vector<std::int64_t>{ls1.value(1), ls1.value(2), ls1.value(3), ls1.value(4),
                                  ls1.value(5)} == std::vector<std::int64_t>{0, 2, 3, 4, 5});

  const OneDHardInstance br = gen_1d_hard(5, 3, OneDKind::brouwer);
  CHECK(br.direction(1) == Direction::plus(0));
  CHECK(br.direction(2) == Direction::plus(0));
  CHECK(br.direction(3) == Direction::zero());
  CHECK(br.direction(4) == Direction::minus(0));
  CHECK(br.direction(5) == Direction::minus(0));
}

TEST_CASE("sink fields are bounded and direction-preserving") {
  const GridPoint target{2, 2};
  const DirectionField f = gen_sink_field(4, 2, target);
  CHECK(f.eval(target).is_zero());
  CHECK(f.eval(GridPoint{1, 2}) == Direction::plus(0));
  CHECK(f.eval(GridPoint{3, 1}) == Direction::minus(0));
  CHECK(validate_direction_field(f));

  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    const int d = 2 + static_cast<int>(rng.below(2));
    const Coord n = 3 + static_cast<Coord>(rng.below(6));
    GridPoint tp(d, 0);
    for (int a = 0; a < d; ++a) tp[a] = 1 + static_cast<Coord>(rng.below(n));
    const DirectionField g = gen_sink_field(n, d, tp);
    CHECK(validate_direction_field(g));
    // Unique zero at the target.
    int zeros = 0;
    g.shape.box().for_each_point([&](const GridPoint& p) { zeros += g.eval(p).is_zero(); });
    CHECK(zeros == 1);
  }
}

TEST_CASE("padding adds a boundary shell without new zeros") {
  const DirectionField f = gen_sink_field(4, 2, GridPoint{2, 3});
  const DirectionField padded = pad_brouwer(f);
  CHECK(padded.shape.lo == 0);
  CHECK(padded.shape.hi == 5);
  CHECK(padded.eval(GridPoint{2, 3}) == f.eval(GridPoint{2, 3}));
  CHECK(padded.eval(GridPoint{0, 3}) == Direction::plus(0));
  CHECK(padded.eval(GridPoint{2, 5}) == Direction::minus(1));
  CHECK(validate_direction_field(padded));

  int zeros = 0;
  padded.shape.box().for_each_point([&](const GridPoint& p) { zeros += padded.eval(p).is_zero(); });
  CHECK(zeros == 1);
}

TEST_CASE("LS to GP reduction") {
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    auto inst = std::make_shared<StaircaseInstance>(gen_const_staircase(9, 2, 2, seed));
    const GpInstance gp = ls_to_gp(inst);

    const GpNeighbors start = gp.neighbors_of(inst->start());
    CHECK_FALSE(start.pred.has_value());
    if (gp.path_steps() > 0) {
      REQUIRE(start.succ.has_value());
      CHECK(*start.succ == inst->walk_point(1));
    }

    // An off-path point is isolated.
    GridPoint off{inst->grid_side, 1};
    if (!inst->trace_index(off) && !(off == inst->end()))
      CHECK(gp.neighbors_of(off) == GpNeighbors{});

    // Walking successor pointers reaches the GP end in exactly path_steps
    // steps, and the end is the unique local minimum.
    GridPoint cur = inst->start();
    std::int64_t steps = 0;
    while (true) {
      const GpNeighbors nb = gp.neighbors_of(cur);
      if (!nb.succ.has_value()) break;
      cur = *nb.succ;
      ++steps;
    }
    CHECK(steps == gp.path_steps());
    CHECK(cur == gp.path_end());
    CHECK(cur == inst->unique_local_min());
    if (inst->end_sign < 0 && gp.path_steps() > 0) {
      const GpNeighbors end = gp.neighbors_of(inst->end());
      CHECK(end.pred.has_value());
      CHECK_FALSE(end.succ.has_value());
    }
  }
}

TEST_CASE("instance serialization round-trips") {
  for (const StaircaseInstance inst :
       {gen_const_staircase(16, 2, 2, 42), gen_poly_staircase(27, 3, 0.5, 42)}) {
    const std::string text = serialize_instance(inst);
    const StaircaseInstance back = parse_instance(text);
    CHECK(back.connecting == inst.connecting);
    CHECK(back.end_sign == inst.end_sign);
    CHECK(back.grid_side == inst.grid_side);
    CHECK(back.path_length() == inst.path_length());
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
      GridPoint p(inst.d, 0);
      for (int a = 0; a < inst.d; ++a)
        p[a] = 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(inst.grid_side)));
      CHECK(back.value_at(p) == inst.value_at(p));
    }
    CHECK(serialize_instance(back) == text);
  }
}
