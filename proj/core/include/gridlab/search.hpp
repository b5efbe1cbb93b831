#pragma once

// Round-limited local-search algorithms: the constant-round divide-and-conquer
// algorithm, the polynomial-round algorithm built from fractal-like steepest
// descent (FLSD) and divide-and-conquer search (DACS) under a round-synchronized
// scheduler, the 1D interval algorithm, and two baselines.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gridlab/geometry.hpp"
#include "gridlab/oracle.hpp"

namespace gridlab {

enum class HaltKind { normal, dacs, steepest_descent_fixpoint };

struct RunReport {
  GridPoint solution;
  std::int64_t rounds_used = 0;
  std::int64_t queries_used = 0;
  HaltKind halted_by = HaltKind::normal;
};

// Algorithm: shrink a chain of cubes, querying all sub-cube boundaries per
// round and recursing into the one holding the boundary minimum; the final
// round scans the remaining cube. Block counts per round are derived from the
// session's grid side via the balanced side schedule.
RunReport const_rounds_ls(ValueSession& session, int k);

// 1D interval algorithm: k rounds of sub-interval endpoints, then a full scan
// of the surviving interval.
RunReport one_d_ls(ValueSession& session, int k);

// Steepest descent with a warm start: t uniform samples in round 1, then one
// descent step per round from the sample minimum.
RunReport baseline_warm_start(ValueSession& session, std::int64_t t, std::uint64_t seed);

// Deterministic divide-and-conquer with axis-aligned walls (the classical
// log-round algorithm, in a thick-wall variant that halves the box every
// round). Queries the median wall slab plus the incumbent's certificate.
RunReport baseline_log_rounds_dnc(ValueSession& session);

// Divide-and-conquer search inside a cube whose boundary minimum is known to
// be beaten by an interior point: halves sides each round, querying all
// sub-cube boundaries and recursing toward the minimum among every point
// ever queried inside the current cube. `known` carries the caller's query
// history. Returns a local minimum of the full grid in <= ceil(log2 side)
// rounds.
GridPoint dacs(ValueSession& session, const Cube& start,
               std::unordered_map<GridPoint, std::int64_t, GridPointHash> known = {});

// Per-call instrumentation of the FLSD/DACS scheduler, for round/query
// accounting audits.
struct FlsdCallStats {
  std::int64_t size = 0;
  int depth = 0;
  std::int64_t start_round = 0;
  GridPoint start_point;
  bool returned_normally = false;
  GridPoint result;
  std::int64_t completion_round = 0;
  std::int64_t queries_subtree = 0;  // points submitted by the call and its sub-procedures
  // (round the comparison fired, round the child completed)
  std::vector<std::pair<std::int64_t, std::int64_t>> comparisons;
};

struct PolyRunTrace {
  std::int64_t k = 0;
  std::int64_t h = 0;
  std::int64_t k_tilde = 0;
  std::int64_t s0 = 0;
  std::int64_t samples = 0;
  double beta = 0.0;
  std::vector<FlsdCallStats> calls;
};

// Randomized polynomial-round algorithm: round 1 samples
// sample_const * h * ceil(n^beta) uniform points, then runs
// FLSD(s, h, x_1, 2) under the scheduler. A normal top-level return is
// finished off with plain steepest descent so the reported solution is always
// a local minimum (sessions with a round limit fail fast instead).
RunReport poly_rounds_ls(ValueSession& session, double alpha, double sample_const,
                         std::uint64_t seed, PolyRunTrace* trace = nullptr);

}  // namespace gridlab
