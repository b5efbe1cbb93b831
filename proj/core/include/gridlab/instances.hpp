#pragma once

// Instance families: constant-round staircases on the side-m grid,
// polynomial-round random-walk staircases on the torus, 1D hard families,
// Brouwer direction fields with padding, and the LS -> GP reduction.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridlab/geometry.hpp"
#include "gridlab/oracle.hpp"
#include "gridlab/rng.hpp"

namespace gridlab {

enum class StairKind { const_round, poly_round };

// ell_i = round(n^{(d^k - d^i)/(d^k - 1)}) clamped to [1, n]; ell_0 == n.
std::vector<Coord> ell_schedule(Coord n, int d, int k);

// Parameters of the polynomial-round walk: window side ell = n^{1-(2/d)a},
// resample period m = n/ell, staircase length K = 2*floor(n^a).
struct PolyParams {
  Coord ell = 0;
  Coord m = 0;
  std::int64_t K = 0;
};
PolyParams poly_params(Coord n, int d, double alpha);

class StaircaseInstance {
 public:
  StairKind kind = StairKind::const_round;
  int d = 0;
  Coord n = 0;           // schedule base (const) or torus side (poly)
  Coord grid_side = 0;   // m = sum of ell_i (const) or n (poly)
  std::vector<Coord> ell;  // window sides per step (const); {ell} for poly
  Coord period = 0;        // poly resample period m; 0 for const
  int k_or_len = 0;        // k (const) or K (poly)
  double alpha = 0.0;      // poly only
  std::uint64_t seed = 0;
  int end_sign = -1;  // -1: end value is minus the path length; +1: L1 value

  std::vector<GridPoint> connecting;  // x_0 .. x_t

  std::int64_t value_at(const GridPoint& p) const;
  const GridPoint& start() const { return connecting.front(); }
  const GridPoint& end() const { return connecting.back(); }
  std::int64_t path_length() const { return path_len_; }
  // Walk point at 1-based path index i (index 0 is the start corner).
  const GridPoint& walk_point(std::int64_t i) const { return walk_[static_cast<std::size_t>(i) - 1]; }
  GridPoint unique_local_min() const;
  // Largest stored path index of p, or nullopt when p is off the trace.
  std::optional<std::int64_t> trace_index(const GridPoint& p) const;

  GridShape shape() const { return GridShape{d, 1, grid_side}; }

  // Recomputes the trace map from the connecting points (deterministic).
  void rebuild_trace();

 private:
  std::unordered_map<GridPoint, std::int64_t, GridPointHash> trace_;
  std::vector<GridPoint> walk_;  // full path in order, start excluded
  std::int64_t path_len_ = 0;
};

// Appendix-B staircase on the side-m grid, m = sum of the schedule sides.
// Randomness is consumed as one offset per axis per step (so a tiny-scale
// sweep over all offset tuples enumerates all staircases), then one端 coin.
StaircaseInstance gen_const_staircase(Coord n, int d, int k, std::uint64_t seed);
StaircaseInstance gen_const_staircase_with_schedule(const std::vector<Coord>& schedule, int d,
                                                    std::uint64_t seed);
// Deterministic variant for exhaustive enumeration: offsets[j][axis] in
// [0, schedule[j]).
StaircaseInstance const_staircase_from_offsets(const std::vector<Coord>& schedule, int d,
                                               const std::vector<std::vector<Coord>>& offsets,
                                               int end_sign);

// Appendix-C.1 random-walk staircase on the torus [n]^d with window draws of
// side ell and a uniform resample every m-th step.
StaircaseInstance gen_poly_staircase(Coord n, int d, double alpha, std::uint64_t seed);

ValueSession make_value_session(std::shared_ptr<const StaircaseInstance> inst,
                                SessionLimits limits = {});

// Single-file textual format: header `kind d n k_or_alpha seed end_sign`,
// then one line per connecting point. The trace is re-derived on load.
std::string serialize_instance(const StaircaseInstance& inst);
StaircaseInstance parse_instance(const std::string& text);

// 1D hard families of Appendix E.
enum class OneDKind { local_search, brouwer };

struct OneDHardInstance {
  Coord n = 0;
  Coord i = 0;  // solution location
  OneDKind kind = OneDKind::local_search;

  std::int64_t value(Coord j) const;     // local_search values
  Direction direction(Coord j) const;    // brouwer directions
};

OneDHardInstance gen_1d_hard(Coord n, Coord i, OneDKind kind);
ValueSession make_value_session(const OneDHardInstance& inst, SessionLimits limits = {});
FieldSession make_field_session(const OneDHardInstance& inst, SessionLimits limits = {});

// Discrete Brouwer instance: bounded direction-preserving x -> {0, +-e^i}.
struct DirectionField {
  GridShape shape;
  std::function<Direction(const GridPoint&)> eval;
};

// f(target) = 0; elsewhere the first axis differing from the target points
// toward it. Bounded and direction-preserving with a unique zero.
DirectionField gen_sink_field(Coord n, int d, const GridPoint& target);

// Pads [1,n]^d to {0..n+1}^d so the outer boundary carries exactly one bad
// (d-1)-dimensional unit cube; no new zero point is introduced.
DirectionField pad_brouwer(const DirectionField& f);

FieldSession make_field_session(const DirectionField& f, SessionLimits limits = {});

// Exhaustive boundedness + direction-preservation check (volume-guarded).
bool validate_direction_field(const DirectionField& f, std::int64_t max_volume = 1000000);

// GP instance over a constant-round staircase: a single directed path from
// the corner following strictly decreasing values; off-path points are
// isolated. One neighbor query is answerable with <= 2d+1 value queries.
class GpInstance {
 public:
  explicit GpInstance(std::shared_ptr<const StaircaseInstance> ls);
  GpNeighbors neighbors_of(const GridPoint& p) const;
  const GridPoint& path_end() const { return path_end_; }
  std::int64_t path_steps() const { return steps_; }
  const StaircaseInstance& staircase() const { return *ls_; }

 private:
  std::shared_ptr<const StaircaseInstance> ls_;
  GridPoint path_end_;
  std::int64_t steps_ = 0;
};

GpInstance ls_to_gp(std::shared_ptr<const StaircaseInstance> inst);
GpSession make_gp_session(std::shared_ptr<const GpInstance> gp, SessionLimits limits = {});

}  // namespace gridlab
