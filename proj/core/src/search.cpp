#include "gridlab/search.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "gridlab/rng.hpp"

namespace gridlab {

namespace {

using ValueMap = std::unordered_map<GridPoint, std::int64_t, GridPointHash>;

void remember(ValueMap& known, const std::vector<GridPoint>& batch,
              const std::vector<std::int64_t>& answers) {
  for (std::size_t i = 0; i < batch.size(); ++i) known[batch[i]] = answers[i];
}

// Minimum by (value, lexicographic point).
GridPoint argmin_points(const ValueMap& known, const std::vector<GridPoint>& pts) {
  const GridPoint* best = nullptr;
  std::int64_t best_v = 0;
  for (const GridPoint& p : pts) {
    const std::int64_t v = known.at(p);
    if (!best || v < best_v || (v == best_v && p < *best)) {
      best = &p;
      best_v = v;
    }
  }
  if (!best) throw DomainError("argmin of empty set");
  return *best;
}

}  // namespace

RunReport const_rounds_ls(ValueSession& session, int k) {
  if (k < 1) throw DomainError("k must be >= 1");
  const GridShape shape = session.shape();
  const int d = shape.d;
  const long double M = static_cast<long double>(shape.side());
  const long double dk = std::pow(static_cast<long double>(d), static_cast<long double>(k));

  ValueMap known;
  Cube current = shape.box();

  for (int round = 1; round < k; ++round) {
    if (current.single_point()) break;
    const long double expo =
        (dk - std::pow(static_cast<long double>(d), static_cast<long double>(round))) / (dk - 1.0L);
    const long double target = std::pow(M, expo);
    const Coord ext = current.max_extent();
    const Coord blocks =
        std::clamp<Coord>(static_cast<Coord>(llroundl(static_cast<long double>(ext) / target)), 1, ext);
    const Coord side = (ext + blocks - 1) / blocks;

    std::vector<Cube> subs = partition_cube(current, side);
    std::vector<GridPoint> batch;
    for (const Cube& c : subs)
      c.for_each_boundary_point([&](const GridPoint& p) { batch.push_back(p); });
    remember(known, batch, session.submit(batch));

    const GridPoint star = argmin_points(known, batch);
    for (const Cube& c : subs)
      if (c.contains(star)) {
        current = c;
        break;
      }
  }

  if (current.single_point() && known.count(current.low())) {
    // Singleton reached early; its value is already on the books.
    return {current.low(), session.ledger().round_count(), session.ledger().total_queries(),
            HaltKind::normal};
  }

  std::vector<GridPoint> batch;
  current.for_each_point([&](const GridPoint& p) { batch.push_back(p); });
  remember(known, batch, session.submit(batch));
  return {argmin_points(known, batch), session.ledger().round_count(),
          session.ledger().total_queries(), HaltKind::normal};
}

RunReport one_d_ls(ValueSession& session, int k) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (session.shape().d != 1) throw DomainError("one_d_ls requires d = 1");
  const Coord n = session.shape().side();
  const Coord B = std::max<Coord>(2, static_cast<Coord>(
                                         std::ceil(std::pow(static_cast<double>(n), 1.0 / k))));
  Coord lo = session.shape().lo, hi = session.shape().hi;
  ValueMap known;

  for (int round = 1; round < k; ++round) {
    if (hi - lo + 1 <= B + 1) break;
    std::vector<Coord> pts;
    for (Coord j = 0; j <= B; ++j)
      pts.push_back(lo + static_cast<Coord>(llroundl(static_cast<long double>(j) * (hi - lo) / B)));
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<GridPoint> batch;
    for (Coord v : pts) batch.push_back(GridPoint{v});
    remember(known, batch, session.submit(batch));

    std::size_t best = 0;
    for (std::size_t j = 1; j < pts.size(); ++j)
      if (known.at(batch[j]) < known.at(batch[best])) best = j;
    // A local minimum survives strictly between the two flanking endpoints.
    lo = best > 0 ? pts[best - 1] + 1 : pts.front();
    hi = best + 1 < pts.size() ? pts[best + 1] - 1 : pts.back();
  }

  std::vector<GridPoint> batch;
  for (Coord v = lo; v <= hi; ++v) batch.push_back(GridPoint{v});
  remember(known, batch, session.submit(batch));
  return {argmin_points(known, batch), session.ledger().round_count(),
          session.ledger().total_queries(), HaltKind::normal};
}

RunReport baseline_warm_start(ValueSession& session, std::int64_t t, std::uint64_t seed) {
  if (t < 1) throw DomainError("warm start requires t >= 1");
  const GridShape shape = session.shape();
  Rng rng(seed);
  std::vector<GridPoint> batch;
  batch.reserve(static_cast<std::size_t>(t));
  for (std::int64_t i = 0; i < t; ++i) {
    GridPoint p(shape.d, 0);
    for (int a = 0; a < shape.d; ++a)
      p[a] = shape.lo + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(shape.side())));
    batch.push_back(p);
  }
  ValueMap known;
  remember(known, batch, session.submit(batch));
  GridPoint x = argmin_points(known, batch);

  while (true) {
    std::vector<GridPoint> step = neighbors(x, shape.box());
    step.push_back(x);
    remember(known, step, session.submit(step));
    step.pop_back();
    const GridPoint next = argmin_points(known, step);
    if (known.at(next) >= known.at(x))
      return {x, session.ledger().round_count(), session.ledger().total_queries(),
              HaltKind::steepest_descent_fixpoint};
    x = next;
  }
}

GridPoint dacs(ValueSession& session, const Cube& start,
               std::unordered_map<GridPoint, std::int64_t, GridPointHash> known) {
  Cube cube = start;
  while (!cube.single_point()) {
    const Coord half = (cube.max_extent() + 1) / 2;
    const std::vector<Cube> blocks = partition_cube(cube, half);
    std::vector<GridPoint> batch;
    for (const Cube& b : blocks)
      b.for_each_boundary_point([&](const GridPoint& p) { batch.push_back(p); });
    remember(known, batch, session.submit(batch));

    // Minimum among all points ever queried inside the current cube.
    const GridPoint* best = nullptr;
    std::int64_t best_v = 0;
    for (const auto& [p, v] : known) {
      if (!cube.contains(p)) continue;
      if (!best || v < best_v || (v == best_v && p < *best)) {
        best = &p;
        best_v = v;
      }
    }
    if (!best) throw DomainError("DACS cube holds no queried point");
    for (const Cube& b : blocks)
      if (b.contains(*best)) {
        cube = b;
        break;
      }
  }
  return cube.low();
}

RunReport baseline_log_rounds_dnc(ValueSession& session) {
  const GridShape shape = session.shape();
  const int d = shape.d;
  if (d < 2) throw DomainError("log-round divide-and-conquer requires d >= 2");
  const Cube grid = shape.box();
  Cube box = grid;
  ValueMap known;
  std::optional<GridPoint> best;

  auto update_best = [&](const std::vector<GridPoint>& pts) {
    for (const GridPoint& p : pts) {
      const std::int64_t v = known.at(p);
      if (!best || v < known.at(*best) || (v == known.at(*best) && p < *best)) best = p;
    }
  };

  while (true) {
    if (box.max_extent() <= 3) {
      std::vector<GridPoint> batch;
      box.for_each_point([&](const GridPoint& p) { batch.push_back(p); });
      remember(known, batch, session.submit(batch));
      return {argmin_points(known, batch), session.ledger().round_count(),
              session.ledger().total_queries(), HaltKind::normal};
    }

    int axis = 0;
    for (int a = 1; a < d; ++a)
      if (box.extent(a) > box.extent(axis)) axis = a;
    const Coord mid = (box.low()[axis] + box.high(axis)) / 2;

    // Thick wall: the median layer and both neighbor layers, so the round's
    // minimum either certifies a local minimum or lands strictly inside one
    // half.
    std::vector<GridPoint> batch;
    for (Coord v = std::max(box.low()[axis], mid - 1); v <= std::min(box.high(axis), mid + 1); ++v) {
      Cube layer = box;
      GridPoint lo = layer.low(), hi = layer.high();
      lo[axis] = hi[axis] = v;
      Cube::from_corners(lo, hi).for_each_point([&](const GridPoint& p) { batch.push_back(p); });
    }
    if (best) {
      batch.push_back(*best);
      for (const GridPoint& q : neighbors(*best, grid)) batch.push_back(q);
    }
    remember(known, batch, session.submit(batch));
    update_best(batch);

    // Verified local minimum: all grid neighbors known and no improvement.
    bool verified = true;
    for (const GridPoint& q : neighbors(*best, grid)) {
      auto it = known.find(q);
      if (it == known.end() || it->second < known.at(*best)) {
        verified = false;
        break;
      }
    }
    if (verified)
      return {*best, session.ledger().round_count(), session.ledger().total_queries(),
              HaltKind::normal};

    GridPoint lo = box.low(), hi = box.high();
    if ((*best)[axis] < mid) {
      hi[axis] = mid - 1;
    } else if ((*best)[axis] > mid) {
      lo[axis] = mid + 1;
    } else {
      // The incumbent sits on the median layer with all neighbors known, so
      // it would have been verified above.
      throw std::logic_error("incumbent stuck on the wall");
    }
    box = Cube::from_corners(lo, hi);
  }
}

}  // namespace gridlab
