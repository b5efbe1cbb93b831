#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <unordered_map>

#include "gridlab/rng.hpp"
#include "gridlab/search.hpp"

// Round-synchronized scheduler for the polynomial-round algorithm. Procedures
// (FLSD calls, DACS calls, the trailing descent) are stepped in creation
// order; per round all query requests are collected into a single batch,
// submitted at once, and the answers distributed before any procedure adapts.
// "Halt all running procedures" flushes everything at the end of the round in
// which the halt was raised.

namespace gridlab {

namespace {

using ValueMap = std::unordered_map<GridPoint, std::int64_t, GridPointHash>;

struct Proc;

struct SchedCtx {
  ValueSession* session = nullptr;
  Cube domain;
  ValueMap known;
  std::int64_t round = 0;  // rounds completed so far (== ledger round count)
  std::int64_t k_tilde = 1;
  std::vector<std::unique_ptr<Proc>> procs;
  bool halted = false;
  GridPoint halt_point;
  HaltKind halt_kind = HaltKind::normal;
  PolyRunTrace* trace = nullptr;

  std::int64_t value(const GridPoint& p) const { return known.at(p); }

  void halt(const GridPoint& p, HaltKind kind) {
    if (halted) return;
    halted = true;
    halt_point = p;
    halt_kind = kind;
  }
};

struct Proc {
  int id = 0;
  int parent = -1;
  bool done = false;
  GridPoint result;
  std::int64_t completion_round = -1;
  std::int64_t queries_own = 0;
  int trace_slot = -1;

  virtual ~Proc() = default;
  // Append queries for the round about to be submitted (ctx.round + 1).
  virtual void collect(SchedCtx& ctx, std::vector<GridPoint>& out) = 0;
  // Advance after the answers of ctx.round landed; return true on progress.
  virtual bool step(SchedCtx& ctx) = 0;
};

GridPoint argmin_known(const SchedCtx& ctx, const std::vector<GridPoint>& pts) {
  const GridPoint* best = nullptr;
  std::int64_t best_v = 0;
  for (const GridPoint& p : pts) {
    const std::int64_t v = ctx.value(p);
    if (!best || v < best_v || (v == best_v && p < *best)) {
      best = &p;
      best_v = v;
    }
  }
  if (!best) throw DomainError("argmin of empty set");
  return *best;
}

struct DescentProc : Proc {
  GridPoint x;
  std::int64_t steps_left = 0;
  std::int64_t start_round = 0;
  std::int64_t last_round = -1;
  bool halt_everything_as_normal = false;  // trailing descent after a normal return

  void collect(SchedCtx& ctx, std::vector<GridPoint>& out) override {
    if (done || ctx.round + 1 < start_round) return;
    std::vector<GridPoint> nb = neighbors(x, ctx.domain);
    out.push_back(x);
    queries_own += 1 + static_cast<std::int64_t>(nb.size());
    for (GridPoint& q : nb) out.push_back(std::move(q));
  }

  bool step(SchedCtx& ctx) override {
    if (done || ctx.round < start_round || ctx.round == last_round) return false;
    last_round = ctx.round;
    const std::vector<GridPoint> nb = neighbors(x, ctx.domain);
    const GridPoint next = nb.empty() ? x : argmin_known(ctx, nb);
    if (nb.empty() || ctx.value(next) >= ctx.value(x)) {
      done = true;
      completion_round = ctx.round;
      result = x;
      ctx.halt(x, halt_everything_as_normal ? HaltKind::normal
                                            : HaltKind::steepest_descent_fixpoint);
      return true;
    }
    x = next;
    if (--steps_left == 0) {
      done = true;
      completion_round = ctx.round;
      result = x;
      if (ctx.trace && trace_slot >= 0) {
        auto& slot = ctx.trace->calls[static_cast<std::size_t>(trace_slot)];
        slot.returned_normally = true;
        slot.result = result;
        slot.completion_round = completion_round;
      }
    }
    return true;
  }
};

struct DacsProc : Proc {
  Cube cube;
  std::int64_t start_round = 0;
  std::int64_t last_round = -1;
  std::vector<Cube> blocks;

  void collect(SchedCtx& ctx, std::vector<GridPoint>& out) override {
    if (done || ctx.round + 1 < start_round || cube.single_point()) return;
    blocks.clear();
    const Coord half = (cube.max_extent() + 1) / 2;
    blocks = partition_cube(cube, half);
    for (const Cube& b : blocks)
      b.for_each_boundary_point([&](const GridPoint& p) {
        out.push_back(p);
        ++queries_own;
      });
  }

  bool step(SchedCtx& ctx) override {
    if (done || ctx.round < start_round || ctx.round == last_round) return false;
    last_round = ctx.round;
    if (cube.single_point()) {
      done = true;
      completion_round = ctx.round;
      result = cube.low();
      return true;
    }
    // Minimum among all points ever queried inside the current cube.
    const GridPoint* best = nullptr;
    std::int64_t best_v = 0;
    for (const auto& [p, v] : ctx.known) {
      if (!cube.contains(p)) continue;
      if (!best || v < best_v || (v == best_v && p < *best)) {
        best = &p;
        best_v = v;
      }
    }
    if (!best) throw std::logic_error("DACS cube holds no queried point");
    for (const Cube& b : blocks)
      if (b.contains(*best)) {
        cube = b;
        break;
      }
    return true;
  }
};

struct FlsdProc : Proc {
  std::int64_t size = 0;
  int depth = 0;
  GridPoint x0;
  std::int64_t start_round = 0;

  std::vector<std::int64_t> sizes;     // per-iteration steps (uneven split)
  std::vector<GridPoint> xs;           // x_0 .. x_{k~}
  std::vector<int> child_ids;
  std::vector<Cube> step_cubes;
  std::size_t launched = 0;            // iterations whose batch is in flight
  std::size_t advanced = 0;            // x_{i+1} values computed
  std::size_t compared = 0;            // comparisons resolved
  int dacs_id = -1;
  std::int64_t last_round = -1;

  FlsdProc(std::int64_t s, int d_, GridPoint x, std::int64_t r, const SchedCtx& ctx)
      : size(s), depth(d_), x0(x), start_round(r) {
    const std::int64_t kt = ctx.k_tilde;
    const std::int64_t q = s / kt, rem = s % kt;
    for (std::int64_t i = 0; i < kt; ++i) sizes.push_back(q + (i < rem ? 1 : 0));
    xs.push_back(x0);
  }

  bool descends() const { return depth <= 1; }  // handled by DescentProc instead

  void collect(SchedCtx& ctx, std::vector<GridPoint>& out) override;
  bool step(SchedCtx& ctx) override;
};

int spawn_flsd(SchedCtx& ctx, std::int64_t s, int depth, const GridPoint& x, std::int64_t r,
               int parent);

void FlsdProc::collect(SchedCtx& ctx, std::vector<GridPoint>& out) {
  if (done || dacs_id >= 0) return;
  const std::int64_t next_round = ctx.round + 1;
  if (next_round < start_round) return;
  const std::size_t it = static_cast<std::size_t>(next_round - start_round);
  if (it >= sizes.size() || it != launched || it >= xs.size()) return;
  // Iteration `it` launches this round: a child on the giant-step start plus
  // the boundary of C(x_it, step).
  child_ids.push_back(
      spawn_flsd(ctx, sizes[it], depth - 1, xs[it], next_round, id));
  Cube c = Cube::centered(xs[it], sizes[it], ctx.domain);
  step_cubes.push_back(c);
  c.for_each_boundary_point([&](const GridPoint& p) {
    out.push_back(p);
    ++queries_own;
  });
  ++launched;
}

bool FlsdProc::step(SchedCtx& ctx) {
  if (done) return false;
  bool progress = false;

  // Resolve the boundary minimum of the iteration whose batch just landed.
  if (advanced < launched && ctx.round >= start_round + static_cast<std::int64_t>(advanced)) {
    std::vector<GridPoint> pts = step_cubes[advanced].boundary_points();
    xs.push_back(argmin_known(ctx, pts));
    ++advanced;
    progress = true;
  }

  // Comparisons, in iteration order; each waits for its nominal round and for
  // the child's completion.
  while (dacs_id < 0 && compared < static_cast<std::size_t>(advanced) &&
         compared < child_ids.size()) {
    const std::int64_t nominal =
        start_round + static_cast<std::int64_t>(compared) + static_cast<std::int64_t>(depth - 1) * ctx.k_tilde;
    Proc& child = *ctx.procs[static_cast<std::size_t>(child_ids[compared])];
    if (!child.done || ctx.round < nominal) break;
    if (ctx.trace)
      ctx.trace->calls[static_cast<std::size_t>(trace_slot)].comparisons.emplace_back(
          ctx.round, child.completion_round);
    const GridPoint& y = child.result;
    const GridPoint& xi1 = xs[compared + 1];
    if (ctx.value(y) < ctx.value(xi1)) {
      // A solution hides in C(x_i, step): delegate to DACS and halt when done.
      auto dacs = std::make_unique<DacsProc>();
      dacs->id = static_cast<int>(ctx.procs.size());
      dacs->parent = id;
      dacs->cube = step_cubes[compared];
      dacs->start_round = ctx.round + 1;
      dacs_id = dacs->id;
      ctx.procs.push_back(std::move(dacs));
      progress = true;
      break;
    }
    ++compared;
    progress = true;
  }

  if (dacs_id >= 0) {
    Proc& dacs = *ctx.procs[static_cast<std::size_t>(dacs_id)];
    if (dacs.done) {
      done = true;
      completion_round = ctx.round;
      result = dacs.result;
      ctx.halt(dacs.result, HaltKind::dacs);
      return true;
    }
    return progress;
  }

  if (compared == sizes.size() && !done) {
    done = true;
    completion_round = std::max(ctx.round, start_round + static_cast<std::int64_t>(depth) * ctx.k_tilde);
    result = xs.back();
    if (ctx.trace) {
      auto& slot = ctx.trace->calls[static_cast<std::size_t>(trace_slot)];
      slot.returned_normally = true;
      slot.result = result;
      slot.completion_round = completion_round;
    }
    return true;
  }
  return progress;
}

int spawn_flsd(SchedCtx& ctx, std::int64_t s, int depth, const GridPoint& x, std::int64_t r,
               int parent) {
  const int id = static_cast<int>(ctx.procs.size());
  if (depth <= 1 || s <= ctx.k_tilde) {
    // Base case: s rounds of plain steepest descent, one step per round.
    auto p = std::make_unique<DescentProc>();
    p->id = id;
    p->parent = parent;
    p->x = x;
    p->steps_left = std::max<std::int64_t>(s, 1);
    p->start_round = r;
    if (ctx.trace) {
      p->trace_slot = static_cast<int>(ctx.trace->calls.size());
      ctx.trace->calls.push_back({s, 1, r, x, false, {}, 0, 0, {}});
    }
    ctx.procs.push_back(std::move(p));
  } else {
    auto p = std::make_unique<FlsdProc>(s, depth, x, r, ctx);
    p->id = id;
    p->parent = parent;
    if (ctx.trace) {
      p->trace_slot = static_cast<int>(ctx.trace->calls.size());
      ctx.trace->calls.push_back({s, depth, r, x, false, {}, 0, 0, {}});
    }
    ctx.procs.push_back(std::move(p));
  }
  return id;
}

// Runs rounds until a halt or until every procedure has finished.
void run_scheduler(SchedCtx& ctx) {
  while (!ctx.halted) {
    std::vector<GridPoint> batch;
    bool all_done = true;
    for (std::size_t i = 0; i < ctx.procs.size(); ++i) {  // procs may spawn during collect
      ctx.procs[i]->collect(ctx, batch);
      all_done = all_done && ctx.procs[i]->done;
    }
    if (all_done) return;
    const std::vector<std::int64_t> answers = ctx.session->submit(batch);
    ++ctx.round;
    for (std::size_t i = 0; i < batch.size(); ++i) ctx.known[batch[i]] = answers[i];
    bool progress = true;
    while (progress && !ctx.halted) {
      progress = false;
      for (auto& p : ctx.procs) progress = p->step(ctx) || progress;
    }
  }
}

}  // namespace

RunReport poly_rounds_ls(ValueSession& session, double alpha, double sample_const,
                         std::uint64_t seed, PolyRunTrace* trace) {
  const GridShape shape = session.shape();
  const int d = shape.d;
  if (d < 3) throw DomainError("polynomial-round algorithm requires d >= 3");
  if (!(alpha > 0.0) || !(alpha < d / 2.0)) throw DomainError("alpha out of (0, d/2)");
  if (!(sample_const > 0.0)) throw DomainError("sample_const must be positive");
  if (session.ledger().round_count() != 0)
    throw DomainError("poly_rounds_ls needs a fresh session");
  const Coord n = shape.side();

  const std::int64_t k = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), alpha)));
  const std::int64_t h =
      static_cast<std::int64_t>(std::floor(1.0 / alpha + (d - 2) / static_cast<double>(d))) + 1;
  const std::int64_t k_tilde = std::max<std::int64_t>(1, k / h);
  const double beta = (d - 1) - alpha * (d - 2) / static_cast<double>(d);
  const std::int64_t s0 = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::floor(
             std::pow(static_cast<double>(n), 1.0 + alpha * (d - 2) / static_cast<double>(d)) / h)));
  std::int64_t samples = static_cast<std::int64_t>(std::floor(
      sample_const * static_cast<double>(h) * std::ceil(std::pow(static_cast<double>(n), beta))));
  samples = std::max<std::int64_t>(1, samples);

  if (trace) {
    trace->k = k;
    trace->h = h;
    trace->k_tilde = k_tilde;
    trace->s0 = s0;
    trace->samples = samples;
    trace->beta = beta;
    trace->calls.clear();
  }

  SchedCtx ctx;
  ctx.session = &session;
  ctx.domain = shape.box();
  ctx.k_tilde = k_tilde;
  ctx.trace = trace;

  // Round 1: uniform samples.
  Rng rng = Rng(seed).split(0x706f6c79);
  std::vector<GridPoint> batch;
  batch.reserve(static_cast<std::size_t>(samples));
  for (std::int64_t i = 0; i < samples; ++i) {
    GridPoint p(d, 0);
    for (int a = 0; a < d; ++a)
      p[a] = shape.lo + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(shape.side())));
    batch.push_back(p);
  }
  const std::vector<std::int64_t> answers = session.submit(batch);
  ++ctx.round;
  for (std::size_t i = 0; i < batch.size(); ++i) ctx.known[batch[i]] = answers[i];
  const GridPoint x1 = argmin_known(ctx, batch);

  const int root = spawn_flsd(ctx, s0, static_cast<int>(h), x1, 2, -1);
  run_scheduler(ctx);

  if (!ctx.halted) {
    // The top-level call returned a rank-reduced point; finish with plain
    // steepest descent so the output is a local minimum.
    auto tail = std::make_unique<DescentProc>();
    tail->id = static_cast<int>(ctx.procs.size());
    tail->x = ctx.procs[static_cast<std::size_t>(root)]->result;
    tail->steps_left = std::numeric_limits<std::int64_t>::max();
    tail->start_round = ctx.round + 1;
    tail->halt_everything_as_normal = true;
    ctx.procs.push_back(std::move(tail));
    run_scheduler(ctx);
  }

  if (trace) {
    // Fold each procedure's own submissions into its ancestors.
    for (const auto& p : ctx.procs) {
      std::int64_t q = p->queries_own;
      for (int node = p->id; node >= 0; node = ctx.procs[static_cast<std::size_t>(node)]->parent)
        if (int slot = ctx.procs[static_cast<std::size_t>(node)]->trace_slot; slot >= 0)
          ctx.trace->calls[static_cast<std::size_t>(slot)].queries_subtree += q;
    }
  }

  return {ctx.halt_point, session.ledger().round_count(), session.ledger().total_queries(),
          ctx.halt_kind};
}

}  // namespace gridlab
