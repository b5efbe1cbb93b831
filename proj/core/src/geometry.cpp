#include "gridlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace gridlab {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out))
    throw ScaleGuardError("count overflows 64-bit range");
  return out;
}

GridPoint::GridPoint(std::initializer_list<Coord> cs) {
  if (cs.size() > static_cast<std::size_t>(kMaxDim))
    throw DomainError("dimension exceeds kMaxDim");
  for (Coord v : cs) c_[static_cast<std::size_t>(d_++)] = v;
}

GridPoint::GridPoint(int dim, Coord fill) {
  if (dim < 0 || dim > kMaxDim) throw DomainError("dimension exceeds kMaxDim");
  d_ = dim;
  for (int i = 0; i < dim; ++i) c_[static_cast<std::size_t>(i)] = fill;
}

std::string GridPoint::to_string(char sep) const {
  std::string s;
  for (int i = 0; i < d_; ++i) {
    if (i) s += sep;
    s += std::to_string((*this)[i]);
  }
  return s;
}

std::ostream& operator<<(std::ostream& os, const GridPoint& p) {
  return os << '(' << p.to_string() << ')';
}

Coord l1_distance(const GridPoint& a, const GridPoint& b) {
  if (a.dim() != b.dim()) throw DomainError("dimension mismatch");
  Coord s = 0;
  for (int i = 0; i < a.dim(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

Coord linf_distance(const GridPoint& a, const GridPoint& b) {
  if (a.dim() != b.dim()) throw DomainError("dimension mismatch");
  Coord s = 0;
  for (int i = 0; i < a.dim(); ++i) s = std::max<Coord>(s, std::abs(a[i] - b[i]));
  return s;
}

Cube::Cube(GridPoint low, GridPoint extent) : low_(low) {
  if (low.dim() != extent.dim()) throw DomainError("dimension mismatch");
  for (int i = 0; i < low.dim(); ++i) {
    if (extent[i] < 1) throw DomainError("cube extent must be positive");
    ext_[static_cast<std::size_t>(i)] = extent[i];
  }
}

Cube Cube::from_corners(const GridPoint& lo, const GridPoint& hi) {
  GridPoint ext(lo.dim(), 1);
  for (int i = 0; i < lo.dim(); ++i) {
    if (hi[i] < lo[i]) throw DomainError("empty cube");
    ext[i] = hi[i] - lo[i] + 1;
  }
  return Cube(lo, ext);
}

Cube Cube::centered(const GridPoint& x, Coord s, const Cube& domain) {
  if (s < 0) throw DomainError("negative radius");
  GridPoint lo = x, hi = x;
  for (int i = 0; i < x.dim(); ++i) {
    lo[i] = std::max(x[i] - s, domain.low()[i]);
    hi[i] = std::min(x[i] + s, domain.high(i));
  }
  return from_corners(lo, hi);
}

GridPoint Cube::high() const {
  GridPoint h = low_;
  for (int i = 0; i < dim(); ++i) h[i] = high(i);
  return h;
}

std::int64_t Cube::volume() const {
  std::int64_t v = 1;
  for (int i = 0; i < dim(); ++i) v = checked_mul(v, ext_[static_cast<std::size_t>(i)]);
  return v;
}

bool Cube::contains(const GridPoint& p) const {
  if (p.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (p[i] < low_[i] || p[i] > high(i)) return false;
  return true;
}

bool Cube::single_point() const {
  for (int i = 0; i < dim(); ++i)
    if (ext_[static_cast<std::size_t>(i)] != 1) return false;
  return true;
}

Coord Cube::max_extent() const {
  Coord m = 0;
  for (int i = 0; i < dim(); ++i) m = std::max(m, ext_[static_cast<std::size_t>(i)]);
  return m;
}

void Cube::for_each_point(const std::function<void(const GridPoint&)>& fn) const {
  GridPoint p = low_;
  const int d = dim();
  while (true) {
    fn(p);
    int axis = d - 1;
    while (axis >= 0) {
      if (p[axis] < high(axis)) {
        ++p[axis];
        break;
      }
      p[axis] = low_[axis];
      --axis;
    }
    if (axis < 0) return;
  }
}

void Cube::for_each_boundary_point(const std::function<void(const GridPoint&)>& fn) const {
  const int d = dim();
  // Canonical decomposition: a boundary point is counted at its first axis
  // sitting on a face; earlier axes are strictly interior, later axes free.
  GridPoint p(d, 0);
  std::function<void(int, bool)> rec = [&](int axis, bool pinned) {
    if (axis == d) {
      if (pinned) fn(p);
      return;
    }
    const Coord lo = low_[axis], hi = high(axis);
    if (pinned) {
      for (Coord v = lo; v <= hi; ++v) {
        p[axis] = v;
        rec(axis + 1, true);
      }
      return;
    }
    p[axis] = lo;
    rec(axis + 1, true);
    if (hi != lo) {
      p[axis] = hi;
      rec(axis + 1, true);
    }
    for (Coord v = lo + 1; v <= hi - 1; ++v) {
      p[axis] = v;
      rec(axis + 1, false);
    }
  };
  rec(0, false);
}

std::vector<GridPoint> Cube::boundary_points() const {
  std::vector<GridPoint> out;
  for_each_boundary_point([&](const GridPoint& p) { out.push_back(p); });
  return out;
}

std::int64_t Cube::boundary_count() const {
  std::int64_t inner = 1;
  for (int i = 0; i < dim(); ++i)
    inner = checked_mul(inner, std::max<Coord>(ext_[static_cast<std::size_t>(i)] - 2, 0));
  return volume() - inner;
}

std::ostream& operator<<(std::ostream& os, const Cube& c) {
  os << '[' << c.low().to_string() << "..(";
  for (int i = 0; i < c.dim(); ++i) {
    if (i) os << ',';
    os << c.high(i);
  }
  return os << ")]";
}

std::vector<GridPoint> neighbors(const GridPoint& p, const Cube& domain) {
  if (!domain.contains(p)) throw DomainError("point outside domain");
  std::vector<GridPoint> out;
  out.reserve(static_cast<std::size_t>(2 * p.dim()));
  for (int i = 0; i < p.dim(); ++i) {
    for (Coord step : {Coord{-1}, Coord{1}}) {
      GridPoint q = p;
      q[i] += step;
      if (domain.contains(q)) out.push_back(q);
    }
  }
  return out;
}

std::vector<GridPoint> neighbors(const GridPoint& p, Coord n) {
  return neighbors(p, full_grid(p.dim(), n));
}

Cube full_grid(int d, Coord n) {
  if (n < 1) throw DomainError("grid side must be positive");
  return Cube(GridPoint(d, 1), GridPoint(d, n));
}

std::vector<Cube> partition_cube(const Cube& c, Coord side) {
  if (side < 1) throw DomainError("partition side must be positive");
  const int d = c.dim();
  std::array<Coord, kMaxDim> blocks{};
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) {
    blocks[static_cast<std::size_t>(i)] = (c.extent(i) + side - 1) / side;
    total = checked_mul(total, blocks[static_cast<std::size_t>(i)]);
  }
  std::vector<Cube> out;
  out.reserve(static_cast<std::size_t>(total));
  GridPoint idx(d, 0);
  while (true) {
    GridPoint lo(d, 0), ext(d, 1);
    for (int i = 0; i < d; ++i) {
      lo[i] = c.low()[i] + idx[i] * side;
      ext[i] = std::min(side, c.high(i) - lo[i] + 1);
    }
    out.emplace_back(lo, ext);
    int axis = d - 1;
    while (axis >= 0) {
      if (idx[axis] + 1 < blocks[static_cast<std::size_t>(axis)]) {
        ++idx[axis];
        break;
      }
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return out;
}

FoldedSegment::FoldedSegment(GridPoint origin, GridPoint target, Coord wrap_n)
    : origin_(origin), target_(target), wrap_n_(wrap_n) {
  if (origin.dim() != target.dim()) throw DomainError("dimension mismatch");
  if (wrap_n_ < 0) throw DomainError("negative wrap");
}

Coord FoldedSegment::delta(int axis) const {
  const Coord diff = target_[axis] - origin_[axis];
  if (wrap_n_ == 0) return std::abs(diff);
  return ((diff % wrap_n_) + wrap_n_) % wrap_n_;
}

std::int64_t FoldedSegment::length() const {
  std::int64_t len = 0;
  for (int i = 0; i < origin_.dim(); ++i) len += delta(i);
  return len;
}

std::int64_t FoldedSegment::index_of(const GridPoint& p) const {
  if (p.dim() != origin_.dim()) return 0;
  const int d = origin_.dim();
  std::int64_t base = 0;
  for (int i = 0; i < d; ++i) {
    const Coord di = delta(i);
    if (di == 0) continue;
    // Points of the axis-i leg look like (t_1..t_{i-1}, z, o_{i+1}..o_d).
    bool shape_ok = true;
    for (int j = 0; j < i && shape_ok; ++j) shape_ok = (p[j] == target_[j]);
    for (int j = i + 1; j < d && shape_ok; ++j) shape_ok = (p[j] == origin_[j]);
    if (shape_ok) {
      Coord off;
      if (wrap_n_ == 0) {
        const Coord sign = target_[i] > origin_[i] ? 1 : -1;
        off = (p[i] - origin_[i]) * sign;
      } else {
        off = (((p[i] - origin_[i]) % wrap_n_) + wrap_n_) % wrap_n_;
      }
      if (off >= 1 && off <= di) return base + off;
    }
    base += di;
  }
  return 0;
}

void FoldedSegment::for_each(
    const std::function<void(const GridPoint&, std::int64_t)>& fn) const {
  const int d = origin_.dim();
  GridPoint p = origin_;
  std::int64_t idx = 0;
  for (int i = 0; i < d; ++i) {
    const Coord di = delta(i);
    const Coord step = (wrap_n_ == 0 && target_[i] < origin_[i]) ? -1 : 1;
    for (Coord s = 0; s < di; ++s) {
      p[i] += step;
      if (wrap_n_ > 0 && p[i] > wrap_n_) p[i] -= wrap_n_;
      fn(p, ++idx);
    }
    p[i] = target_[i];
  }
}

std::vector<GridPoint> FoldedSegment::materialize() const {
  std::vector<GridPoint> out;
  out.reserve(static_cast<std::size_t>(length()));
  for_each([&](const GridPoint& p, std::int64_t) { out.push_back(p); });
  return out;
}

Cube corner_window(const GridPoint& x, Coord ell) {
  if (ell < 1) throw DomainError("window side must be positive");
  return Cube(x, GridPoint(x.dim(), ell));
}

Coord wrap_coord(Coord v, Coord n) {
  Coord r = v % n;
  if (r <= 0) r += n;
  return r;
}

GridPoint wrap_point(const GridPoint& p, Coord n) {
  GridPoint q = p;
  for (int i = 0; i < p.dim(); ++i) q[i] = wrap_coord(q[i], n);
  return q;
}

bool in_w1(Coord x, Coord y, Coord ell, Coord n) {
  return (x < y && y <= x + ell) || y <= x + ell - n;
}

WindowSets window_sets(const GridPoint& x, Coord ell, Coord n) {
  if (ell < 1 || ell >= n) throw DomainError("window requires 1 <= ell < n");
  const int d = x.dim();
  WindowSets ws;

  ws.w1.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    for (Coord s = 1; s <= ell; ++s)
      ws.w1[static_cast<std::size_t>(i)].push_back(wrap_coord(x[i] + s, n));

  // W(x): product of the per-axis windows, enumerated in offset order.
  GridPoint off(d, 1);
  while (true) {
    GridPoint y = x;
    for (int i = 0; i < d; ++i) y[i] = wrap_coord(x[i] + off[i], n);
    ws.w.push_back(y);
    int axis = d - 1;
    while (axis >= 0) {
      if (off[axis] < ell) {
        ++off[axis];
        break;
      }
      off[axis] = 1;
      --axis;
    }
    if (axis < 0) break;
  }

  // W^{-1}_i(x): axes j <= i in the inverse window, axes j > i equal to x.
  ws.w_inv.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    GridPoint steps(i + 1, 1);
    while (true) {
      GridPoint y = x;
      for (int j = 0; j <= i; ++j) y[j] = wrap_coord(x[j] - steps[j], n);
      ws.w_inv[static_cast<std::size_t>(i)].push_back(y);
      int axis = i;
      while (axis >= 0) {
        if (steps[axis] < ell) {
          ++steps[axis];
          break;
        }
        steps[axis] = 1;
        --axis;
      }
      if (axis < 0) break;
    }
  }

  // W^b_i(x): axes j < i inverse-window, axis i in (max(n-ell, x_i), n],
  // axes j > i equal to x.
  ws.w_back.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const Coord lo_i = std::max(n - ell, x[i]);
    if (lo_i >= n) continue;
    GridPoint steps(std::max(i, 1), 1);
    while (true) {
      for (Coord yi = lo_i + 1; yi <= n; ++yi) {
        GridPoint y = x;
        for (int j = 0; j < i; ++j) y[j] = wrap_coord(x[j] - steps[j], n);
        y[i] = yi;
        ws.w_back[static_cast<std::size_t>(i)].push_back(y);
      }
      if (i == 0) break;
      int axis = i - 1;
      while (axis >= 0) {
        if (steps[axis] < ell) {
          ++steps[axis];
          break;
        }
        steps[axis] = 1;
        --axis;
      }
      if (axis < 0) break;
    }
  }

  std::set<GridPoint> uni;
  for (const auto& v : ws.w_inv) uni.insert(v.begin(), v.end());
  for (const auto& v : ws.w_back) uni.insert(v.begin(), v.end());
  ws.w_r.assign(uni.begin(), uni.end());
  return ws;
}

}  // namespace gridlab
