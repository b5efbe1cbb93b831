#include "gridlab/brouwer.hpp"

#include <algorithm>
#include <cmath>

namespace gridlab {

std::vector<GridPoint> UnitCube::corners() const {
  std::vector<GridPoint> out;
  const int k = cube_dim();
  out.reserve(static_cast<std::size_t>(1) << k);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    GridPoint p = base;
    for (int b = 0; b < k; ++b)
      if (mask & (1u << b)) ++p[dims[static_cast<std::size_t>(b)]];
    out.push_back(p);
  }
  return out;
}

namespace {

std::string memo_key(const UnitCube& c) {
  std::string k = c.base.to_string();
  k += '|';
  for (int a : c.dims) {
    k += static_cast<char>('0' + a);
  }
  return k;
}

}  // namespace

bool is_bad_cube(const UnitCube& c, const DirectionLookup& f, BadCubeMemo* memo) {
  if (c.cube_dim() == 0) return f(c.base) == Direction::plus(0);

  std::string key;
  if (memo) {
    key = memo_key(c);
    auto it = memo->cache.find(key);
    if (it != memo->cache.end()) return it->second;
  }

  const int i = c.cube_dim();
  // Condition 1: the corner value set is exactly {e^1, ..., e^{i+1}}.
  bool seen[kMaxDim + 1] = {};
  bool ok = true;
  for (const GridPoint& p : c.corners()) {
    const Direction dir = f(p);
    if (dir.is_zero() || dir.sign() < 0 || dir.axis() > i) {
      ok = false;
      break;
    }
    seen[dir.axis()] = true;
  }
  if (ok)
    for (int a = 0; a <= i; ++a) ok = ok && seen[a];

  bool bad = false;
  if (ok) {
    // Condition 2: odd number of bad (i-1)-dimensional faces.
    int odd = 0;
    for (std::size_t drop = 0; drop < c.dims.size(); ++drop) {
      UnitCube face;
      face.dims.reserve(c.dims.size() - 1);
      for (std::size_t t = 0; t < c.dims.size(); ++t)
        if (t != drop) face.dims.push_back(c.dims[t]);
      for (int offset = 0; offset <= 1; ++offset) {
        face.base = c.base;
        face.base[c.dims[drop]] += offset;
        if (is_bad_cube(face, f, memo)) odd ^= 1;
      }
    }
    bad = odd == 1;
  }
  if (memo) memo->cache[key] = bad;
  return bad;
}

namespace {

// Every corner of the unit (d-1)-cube lies on the boundary of `box` iff some
// axis has all of its choices pinned to a face of `box`.
bool on_box_boundary(const Cube& box, const GridPoint& base, const std::vector<int>& dims,
                     int missing) {
  if (base[missing] == box.low()[missing] || base[missing] == box.high(missing)) return true;
  for (int a : dims)
    if (box.extent(a) == 2) return true;
  return false;
}

}  // namespace

std::int64_t boundary_bad_count(const Cube& box, const DirectionLookup& f) {
  const int d = box.dim();
  if (d < 1) throw DomainError("empty box");
  std::int64_t count = 0;
  BadCubeMemo memo;
  for (int missing = 0; missing < d; ++missing) {
    std::vector<int> dims;
    bool feasible = true;
    bool extent2 = false;
    for (int a = 0; a < d; ++a) {
      if (a == missing) continue;
      if (box.extent(a) < 2) feasible = false;
      if (box.extent(a) == 2) extent2 = true;
      dims.push_back(a);
    }
    if (!feasible || (d > 1 && dims.empty())) continue;
    if (d == 1) {
      // 0-dimensional "faces" of an interval: its two endpoints.
      for (Coord v : {box.low()[0], box.high(0)}) {
        UnitCube c{GridPoint{v}, {}};
        if (is_bad_cube(c, f, &memo)) ++count;
        if (box.extent(0) == 1) break;
      }
      return count;
    }

    // Positions of the missing axis: faces only, unless an extent-2 spanned
    // axis pins every corner to the boundary anyway.
    std::vector<Coord> positions;
    if (extent2) {
      for (Coord v = box.low()[missing]; v <= box.high(missing); ++v) positions.push_back(v);
    } else {
      positions.push_back(box.low()[missing]);
      if (box.high(missing) != box.low()[missing]) positions.push_back(box.high(missing));
    }

    GridPoint base = box.low();
    std::function<void(std::size_t)> rec = [&](std::size_t idx) {
      if (idx == dims.size()) {
        for (Coord v : positions) {
          base[missing] = v;
          if (!on_box_boundary(box, base, dims, missing)) continue;
          UnitCube c{base, dims};
          if (is_bad_cube(c, f, &memo)) ++count;
        }
        base[missing] = box.low()[missing];
        return;
      }
      const int a = dims[idx];
      for (Coord v = box.low()[a]; v + 1 <= box.high(a); ++v) {
        base[a] = v;
        rec(idx + 1);
      }
      base[a] = box.low()[a];
    };
    rec(0);
  }
  return count;
}

int boundary_bad_parity(const Cube& box, const DirectionLookup& f) {
  return static_cast<int>(boundary_bad_count(box, f) & 1);
}

namespace {

struct Known {
  std::unordered_map<GridPoint, Direction, GridPointHash> map;
  Direction operator()(const GridPoint& p) const {
    auto it = map.find(p);
    if (it == map.end()) throw std::logic_error("direction not queried");
    return it->second;
  }
};

// Wall positions splitting [lo, hi] into `blocks` closed intervals that share
// endpoints; gaps are kept >= 2 so interior unit faces are shared by exactly
// two sub-cubes.
std::vector<Coord> wall_positions(Coord lo, Coord hi, Coord blocks) {
  std::vector<Coord> walls;
  const Coord span = hi - lo;
  blocks = std::clamp<Coord>(blocks, 1, std::max<Coord>(1, span / 2));
  for (Coord j = 0; j <= blocks; ++j)
    walls.push_back(lo + static_cast<Coord>(llroundl(static_cast<long double>(j) * span / blocks)));
  walls.erase(std::unique(walls.begin(), walls.end()), walls.end());
  return walls;
}

}  // namespace

BrouwerRunReport const_rounds_brouwer(FieldSession& session, int k) {
  if (k < 1) throw DomainError("k must be >= 1");
  const GridShape shape = session.shape();
  const int d = shape.d;
  const long double L = static_cast<long double>(shape.side());
  const long double dk = std::pow(static_cast<long double>(d), static_cast<long double>(k));

  Known known;
  Cube current = shape.box();

  for (int round = 1; round < k; ++round) {
    if (current.single_point()) break;
    const long double expo =
        (dk - std::pow(static_cast<long double>(d), static_cast<long double>(round))) / (dk - 1.0L);
    const Coord target_side = std::max<Coord>(1, static_cast<Coord>(llroundl(std::pow(L, expo))));

    std::vector<std::vector<Coord>> walls(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
      const Coord blocks = std::max<Coord>(
          1, static_cast<Coord>(llroundl(static_cast<long double>(current.extent(a)) / target_side)));
      walls[static_cast<std::size_t>(a)] = wall_positions(current.low()[a], current.high(a), blocks);
    }

    // Union of all sub-cube boundaries: points with some coordinate on a
    // wall. Canonical decomposition by the first on-wall axis keeps the work
    // proportional to the emitted count.
    std::vector<GridPoint> batch;
    GridPoint p = current.low();
    std::function<void(int)> fill_free = [&](int axis) {
      if (axis == d) {
        batch.push_back(p);
        return;
      }
      for (Coord v = current.low()[axis]; v <= current.high(axis); ++v) {
        p[axis] = v;
        fill_free(axis + 1);
      }
      p[axis] = current.low()[axis];
    };
    std::function<void(int)> seek = [&](int axis) {
      if (axis == d) return;
      const auto& w = walls[static_cast<std::size_t>(axis)];
      for (Coord v : w) {
        p[axis] = v;
        fill_free(axis + 1);
      }
      if (axis + 1 == d) {  // later axes would have to carry the wall
        p[axis] = current.low()[axis];
        return;
      }
      std::size_t next = 0;
      for (Coord v = current.low()[axis]; v <= current.high(axis); ++v) {
        if (next < w.size() && w[next] == v) {
          ++next;
          continue;
        }
        p[axis] = v;
        seek(axis + 1);
      }
      p[axis] = current.low()[axis];
    };
    seek(0);

    const std::vector<Direction> answers = session.submit(batch);
    for (std::size_t i = 0; i < batch.size(); ++i) known.map[batch[i]] = answers[i];

    // Lexicographically first sub-cube with odd boundary-bad parity.
    Cube next_cube;
    bool found = false;
    GridPoint idx(d, 0);
    while (!found) {
      GridPoint lo(d, 0), hi(d, 0);
      for (int a = 0; a < d; ++a) {
        const auto& w = walls[static_cast<std::size_t>(a)];
        lo[a] = w[static_cast<std::size_t>(idx[a])];
        hi[a] = w[static_cast<std::size_t>(idx[a]) + 1];
      }
      Cube sub = Cube::from_corners(lo, hi);
      if (boundary_bad_parity(sub, [&known](const GridPoint& q) { return known(q); }) == 1) {
        next_cube = sub;
        found = true;
        break;
      }
      int axis = d - 1;
      while (axis >= 0) {
        if (idx[axis] + 2 < static_cast<Coord>(walls[static_cast<std::size_t>(axis)].size())) {
          ++idx[axis];
          break;
        }
        idx[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
    if (!found) throw std::logic_error("no odd-parity sub-cube: parity invariant violated");
    current = next_cube;
  }

  // Final round: scan the remaining cube.
  std::vector<GridPoint> batch;
  current.for_each_point([&](const GridPoint& q) { batch.push_back(q); });
  const std::vector<Direction> answers = session.submit(batch);
  for (std::size_t i = 0; i < batch.size(); ++i)
    if (answers[i].is_zero())
      return {batch[i], session.ledger().round_count(), session.ledger().total_queries()};
  throw std::logic_error("no zero point in the final cube: parity invariant violated");
}

BrouwerRunReport one_d_brouwer(FieldSession& session, int k) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (session.shape().d != 1) throw DomainError("one_d_brouwer requires d = 1");
  const Coord n = session.shape().side();
  const Coord B = std::max<Coord>(2, static_cast<Coord>(
                                         std::ceil(std::pow(static_cast<double>(n), 1.0 / k))));
  Coord lo = session.shape().lo, hi = session.shape().hi;

  for (int round = 1; round < k; ++round) {
    if (hi - lo + 1 <= B + 1) break;
    std::vector<Coord> pts;
    for (Coord j = 0; j <= B; ++j)
      pts.push_back(lo + static_cast<Coord>(llroundl(static_cast<long double>(j) * (hi - lo) / B)));
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<GridPoint> batch;
    for (Coord v : pts) batch.push_back(GridPoint{v});
    const std::vector<Direction> answers = session.submit(batch);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (answers[i].is_zero())
        return {batch[i], session.ledger().round_count(), session.ledger().total_queries()};
    bool picked = false;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (answers[i] == Direction::plus(0) && answers[i + 1] == Direction::minus(0)) {
        lo = pts[i];
        hi = pts[i + 1];
        picked = true;
        break;
      }
    }
    if (!picked) throw std::logic_error("no inward sub-interval: field not direction-preserving");
  }

  std::vector<GridPoint> batch;
  for (Coord v = lo; v <= hi; ++v) batch.push_back(GridPoint{v});
  const std::vector<Direction> answers = session.submit(batch);
  for (std::size_t i = 0; i < batch.size(); ++i)
    if (answers[i].is_zero())
      return {batch[i], session.ledger().round_count(), session.ledger().total_queries()};
  throw std::logic_error("no zero point in the final interval");
}

bool verify_zero(const FieldSession& s, const GridPoint& x) { return s.peek(x).is_zero(); }

bool verify_zero(const DirectionField& f, const GridPoint& x) { return f.eval(x).is_zero(); }

}  // namespace gridlab
