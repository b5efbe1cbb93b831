#include "gridlab/instances.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gridlab {

std::vector<Coord> ell_schedule(Coord n, int d, int k) {
  if (n < 1 || d < 1 || k < 1) throw DomainError("ell_schedule requires n, d, k >= 1");
  std::vector<Coord> out(static_cast<std::size_t>(k));
  const long double dk = std::pow(static_cast<long double>(d), static_cast<long double>(k));
  out[0] = n;
  for (int i = 1; i < k; ++i) {
    const long double di = std::pow(static_cast<long double>(d), static_cast<long double>(i));
    const long double expo = (dk - di) / (dk - 1.0L);
    Coord v = static_cast<Coord>(llroundl(std::pow(static_cast<long double>(n), expo)));
    v = std::clamp<Coord>(v, 1, n);
    // The exponent is decreasing in i, so enforce monotonicity against
    // floating rounding.
    v = std::min(v, out[static_cast<std::size_t>(i) - 1]);
    out[static_cast<std::size_t>(i)] = v;
  }
  return out;
}

PolyParams poly_params(Coord n, int d, double alpha) {
  if (d < 3) throw DomainError("polynomial-round walk requires d >= 3");
  if (!(alpha > 0.0) || !(alpha < d / 2.0)) throw DomainError("alpha out of (0, d/2)");
  PolyParams p;
  p.ell = static_cast<Coord>(llroundl(
      std::pow(static_cast<long double>(n), 1.0L - (2.0L / d) * static_cast<long double>(alpha))));
  if (p.ell < 2) throw DomainError("degenerate walk: ell < 2 after rounding");
  if (p.ell >= n) throw DomainError("degenerate walk: ell >= n");
  p.m = std::max<Coord>(1, static_cast<Coord>(llroundl(static_cast<long double>(n) / p.ell)));
  p.K = 2 * static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), alpha)));
  if (p.K < 1) throw DomainError("degenerate walk: K < 1");
  return p;
}

std::int64_t StaircaseInstance::value_at(const GridPoint& p) const {
  if (p == end())
    return end_sign < 0 ? -path_len_ : l1_distance(p, start());
  auto it = trace_.find(p);
  if (it != trace_.end()) return -it->second;
  return l1_distance(p, start());
}

GridPoint StaircaseInstance::unique_local_min() const {
  if (end_sign < 0) return end();
  if (path_len_ <= 1) return start();
  return walk_[static_cast<std::size_t>(path_len_) - 2];
}

std::optional<std::int64_t> StaircaseInstance::trace_index(const GridPoint& p) const {
  auto it = trace_.find(p);
  if (it == trace_.end()) return std::nullopt;
  return it->second;
}

void StaircaseInstance::rebuild_trace() {
  trace_.clear();
  walk_.clear();
  path_len_ = 0;
  const Coord wrap = (kind == StairKind::poly_round) ? n : 0;
  trace_[connecting.front()] = 0;
  for (std::size_t j = 1; j < connecting.size(); ++j) {
    FoldedSegment fs(connecting[j - 1], connecting[j], wrap);
    const std::int64_t base = path_len_;
    fs.for_each([&](const GridPoint& p, std::int64_t idx) {
      const std::int64_t global = base + idx;
      walk_.push_back(p);
      auto [it, inserted] = trace_.try_emplace(p, global);
      if (!inserted && it->second < global) it->second = global;  // self-intersections keep the largest index
    });
    path_len_ = base + fs.length();
  }
}

namespace {

StaircaseInstance build_const(const std::vector<Coord>& schedule, int d,
                              const std::vector<std::vector<Coord>>& offsets, int end_sign,
                              Coord n, std::uint64_t seed) {
  if (d < 1 || d > kMaxDim) throw DomainError("bad dimension");
  StaircaseInstance inst;
  inst.kind = StairKind::const_round;
  inst.d = d;
  inst.n = n;
  inst.ell = schedule;
  inst.k_or_len = static_cast<int>(schedule.size());
  inst.seed = seed;
  inst.end_sign = end_sign;
  Coord m = 0;
  for (Coord l : schedule) {
    if (l < 1) throw DomainError("schedule sides must be >= 1");
    m += l;
  }
  inst.grid_side = m;
  GridPoint x(d, 1);
  inst.connecting.push_back(x);
  for (std::size_t j = 0; j < offsets.size(); ++j) {
    for (int a = 0; a < d; ++a) {
      if (offsets[j][static_cast<std::size_t>(a)] < 0 ||
          offsets[j][static_cast<std::size_t>(a)] >= schedule[j])
        throw DomainError("offset outside window");
      x[a] += offsets[j][static_cast<std::size_t>(a)];
    }
    inst.connecting.push_back(x);
  }
  inst.rebuild_trace();
  return inst;
}

}  // namespace

StaircaseInstance gen_const_staircase(Coord n, int d, int k, std::uint64_t seed) {
  return gen_const_staircase_with_schedule(ell_schedule(n, d, k), d, seed);
}

StaircaseInstance gen_const_staircase_with_schedule(const std::vector<Coord>& schedule, int d,
                                                    std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<Coord>> offsets(schedule.size(), std::vector<Coord>(static_cast<std::size_t>(d)));
  for (std::size_t j = 0; j < schedule.size(); ++j)
    for (int a = 0; a < d; ++a)
      offsets[j][static_cast<std::size_t>(a)] =
          static_cast<Coord>(rng.below(static_cast<std::uint64_t>(schedule[j])));
  const int sign = rng.coin() ? 1 : -1;
  // n is recorded for reporting; the schedule determines everything else.
  Coord n = schedule.empty() ? 1 : schedule.front();
  return build_const(schedule, d, offsets, sign, n, seed);
}

StaircaseInstance const_staircase_from_offsets(const std::vector<Coord>& schedule, int d,
                                               const std::vector<std::vector<Coord>>& offsets,
                                               int end_sign) {
  if (offsets.size() > schedule.size()) throw DomainError("more offsets than schedule steps");
  std::vector<Coord> sched(schedule.begin(), schedule.begin() + static_cast<std::ptrdiff_t>(offsets.size()));
  StaircaseInstance inst = build_const(sched, d, offsets, end_sign,
                                       schedule.empty() ? 1 : schedule.front(), 0);
  // Keep the full schedule's grid side so prefixes live on the same grid.
  Coord m = 0;
  for (Coord l : schedule) m += l;
  inst.grid_side = m;
  inst.ell = schedule;
  inst.k_or_len = static_cast<int>(schedule.size());
  return inst;
}

StaircaseInstance gen_poly_staircase(Coord n, int d, double alpha, std::uint64_t seed) {
  const PolyParams pp = poly_params(n, d, alpha);
  if (d > kMaxDim) throw DomainError("bad dimension");
  StaircaseInstance inst;
  inst.kind = StairKind::poly_round;
  inst.d = d;
  inst.n = n;
  inst.grid_side = n;
  inst.ell = {pp.ell};
  inst.period = pp.m;
  inst.k_or_len = static_cast<int>(pp.K);
  inst.alpha = alpha;
  inst.seed = seed;
  Rng rng(seed);
  GridPoint x(d, 1);
  inst.connecting.push_back(x);
  for (std::int64_t j = 1; j <= pp.K; ++j) {
    if (j % pp.m == 0) {
      for (int a = 0; a < d; ++a)
        x[a] = 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(n)));
    } else {
      for (int a = 0; a < d; ++a)
        x[a] = wrap_coord(x[a] + 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(pp.ell))), n);
    }
    inst.connecting.push_back(x);
  }
  inst.end_sign = rng.coin() ? 1 : -1;
  inst.rebuild_trace();
  return inst;
}

ValueSession make_value_session(std::shared_ptr<const StaircaseInstance> inst,
                                SessionLimits limits) {
  GridShape shape = inst->shape();
  return ValueSession(shape, [inst = std::move(inst)](const GridPoint& p) { return inst->value_at(p); },
                      limits);
}

std::string serialize_instance(const StaircaseInstance& inst) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << (inst.kind == StairKind::const_round ? "const_round" : "poly_round") << ' ' << inst.d
     << ' ' << inst.n << ' ';
  if (inst.kind == StairKind::const_round)
    os << inst.k_or_len;
  else
    os << inst.alpha;
  os << ' ' << inst.seed << ' ' << (inst.end_sign < 0 ? '-' : '+') << '\n';
  for (const GridPoint& p : inst.connecting) os << p.to_string(' ') << '\n';
  return os.str();
}

StaircaseInstance parse_instance(const std::string& text) {
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  std::string kind;
  int d = 0;
  Coord n = 0;
  if (!(is >> kind >> d >> n)) throw DomainError("bad instance header");
  StaircaseInstance inst;
  if (kind == "const_round") {
    int k = 0;
    std::uint64_t seed = 0;
    char sign = 0;
    if (!(is >> k >> seed >> sign)) throw DomainError("bad instance header");
    inst.kind = StairKind::const_round;
    inst.d = d;
    inst.n = n;
    inst.ell = ell_schedule(n, d, k);
    inst.k_or_len = k;
    inst.seed = seed;
    inst.end_sign = sign == '-' ? -1 : 1;
    inst.grid_side = 0;
    for (Coord l : inst.ell) inst.grid_side += l;
  } else if (kind == "poly_round") {
    double alpha = 0;
    std::uint64_t seed = 0;
    char sign = 0;
    if (!(is >> alpha >> seed >> sign)) throw DomainError("bad instance header");
    const PolyParams pp = poly_params(n, d, alpha);
    inst.kind = StairKind::poly_round;
    inst.d = d;
    inst.n = n;
    inst.grid_side = n;
    inst.ell = {pp.ell};
    inst.period = pp.m;
    inst.k_or_len = static_cast<int>(pp.K);
    inst.alpha = alpha;
    inst.seed = seed;
    inst.end_sign = sign == '-' ? -1 : 1;
  } else {
    throw DomainError("unknown instance kind: " + kind);
  }
  const int points = inst.kind == StairKind::const_round ? inst.k_or_len + 1 : inst.k_or_len + 1;
  for (int j = 0; j < points; ++j) {
    GridPoint p(d, 0);
    for (int a = 0; a < d; ++a) {
      Coord v;
      if (!(is >> v)) throw DomainError("truncated instance file");
      if (v < 1 || v > inst.grid_side) throw DomainError("connecting point outside grid");
      p[a] = v;
    }
    inst.connecting.push_back(p);
  }
  inst.rebuild_trace();
  return inst;
}

std::int64_t OneDHardInstance::value(Coord j) const {
  if (j < 1 || j > n) throw DomainError("point outside [1, n]");
  if (j == i) return 0;
  if (kind == OneDKind::local_search) return j > i ? j : n - j + 1;
  return j > i ? -1 : 1;
}

Direction OneDHardInstance::direction(Coord j) const {
  if (kind != OneDKind::brouwer) throw DomainError("not a brouwer instance");
  if (j < 1 || j > n) throw DomainError("point outside [1, n]");
  if (j == i) return Direction::zero();
  return j > i ? Direction::minus(0) : Direction::plus(0);
}

OneDHardInstance gen_1d_hard(Coord n, Coord i, OneDKind kind) {
  if (i < 1 || i > n) throw DomainError("solution location outside [1, n]");
  return OneDHardInstance{n, i, kind};
}

ValueSession make_value_session(const OneDHardInstance& inst, SessionLimits limits) {
  return ValueSession(GridShape{1, 1, inst.n},
                      [inst](const GridPoint& p) { return inst.value(p[0]); }, limits);
}

FieldSession make_field_session(const OneDHardInstance& inst, SessionLimits limits) {
  return FieldSession(GridShape{1, 1, inst.n},
                      [inst](const GridPoint& p) { return inst.direction(p[0]); }, limits);
}

DirectionField gen_sink_field(Coord n, int d, const GridPoint& target) {
  GridShape shape{d, 1, n};
  if (!shape.contains(target)) throw DomainError("target outside grid");
  DirectionField f;
  f.shape = shape;
  f.eval = [target](const GridPoint& x) {
    for (int i = 0; i < x.dim(); ++i) {
      if (x[i] < target[i]) return Direction::plus(i);
      if (x[i] > target[i]) return Direction::minus(i);
    }
    return Direction::zero();
  };
  return f;
}

DirectionField pad_brouwer(const DirectionField& f) {
  if (f.shape.lo != 1) throw DomainError("field already padded");
  const Coord n = f.shape.hi;
  DirectionField out;
  out.shape = GridShape{f.shape.d, 0, n + 1};
  out.eval = [inner = f.eval, n](const GridPoint& x) {
    int axis = -1;
    for (int i = 0; i < x.dim(); ++i)
      if (x[i] == 0 || x[i] == n + 1) axis = i;  // largest qualifying axis
    if (axis < 0) return inner(x);
    return x[axis] == 0 ? Direction::plus(axis) : Direction::minus(axis);
  };
  return out;
}

FieldSession make_field_session(const DirectionField& f, SessionLimits limits) {
  return FieldSession(f.shape, f.eval, limits);
}

bool validate_direction_field(const DirectionField& f, std::int64_t max_volume) {
  const Cube box = f.shape.box();
  if (box.volume() > max_volume)
    throw ScaleGuardError("field too large for exhaustive validation");
  const int d = f.shape.d;
  bool ok = true;
  box.for_each_point([&](const GridPoint& p) {
    if (!ok) return;
    const Direction dp = f.eval(p);
    GridPoint moved = p;
    if (!dp.is_zero()) moved[dp.axis()] += dp.sign();
    if (!f.shape.contains(moved)) {
      ok = false;  // not bounded
      return;
    }
    // L-inf neighbors strictly above p in lex order, to check each pair once.
    GridPoint q = p;
    std::function<void(int, bool)> rec = [&](int axis, bool greater) {
      if (!ok) return;
      if (axis == d) {
        if (greater && direction_linf(dp, f.eval(q), d) > 1) ok = false;
        return;
      }
      for (Coord delta = -1; delta <= 1; ++delta) {
        q[axis] = p[axis] + delta;
        if (q[axis] < f.shape.lo || q[axis] > f.shape.hi) continue;
        if (!greater && delta < 0) continue;
        rec(axis + 1, greater || delta > 0);
      }
      q[axis] = p[axis];
    };
    rec(0, false);
  });
  return ok;
}

GpInstance::GpInstance(std::shared_ptr<const StaircaseInstance> ls) : ls_(std::move(ls)) {
  if (ls_->kind != StairKind::const_round)
    throw DomainError("GP reduction is defined for constant-round staircases");
  path_end_ = ls_->unique_local_min();
  steps_ = ls_->path_length() - (ls_->end_sign > 0 && ls_->path_length() > 0 ? 1 : 0);
}

GpNeighbors GpInstance::neighbors_of(const GridPoint& p) const {
  const std::int64_t v = ls_->value_at(p);
  if (v > 0) return {};  // isolated
  GpNeighbors out;
  for (const GridPoint& q : neighbors(p, ls_->shape().box())) {
    const std::int64_t w = ls_->value_at(q);
    if (w == v + 1 && w <= 0) out.pred = q;
    if (w == v - 1) out.succ = q;
  }
  if (v == 0) out.pred.reset();  // the corner starts the path
  return out;
}

GpInstance ls_to_gp(std::shared_ptr<const StaircaseInstance> inst) {
  return GpInstance(std::move(inst));
}

GpSession make_gp_session(std::shared_ptr<const GpInstance> gp, SessionLimits limits) {
  GridShape shape = gp->staircase().shape();
  return GpSession(shape, [gp = std::move(gp)](const GridPoint& p) { return gp->neighbors_of(p); },
                   limits);
}

}  // namespace gridlab
