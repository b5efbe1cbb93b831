#pragma once

// Discrete Brouwer machinery: bad-cube recursion, boundary parity counting,
// and the round-limited divide-and-conquer solvers.

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "gridlab/geometry.hpp"
#include "gridlab/instances.hpp"
#include "gridlab/oracle.hpp"

namespace gridlab {

// i-dimensional unit cube: base point plus all 0/1 offsets on `dims`.
struct UnitCube {
  GridPoint base;
  std::vector<int> dims;  // strictly increasing axis indices

  int cube_dim() const { return static_cast<int>(dims.size()); }
  std::vector<GridPoint> corners() const;
};

using DirectionLookup = std::function<Direction(const GridPoint&)>;

struct BadCubeMemo {
  std::unordered_map<std::string, bool> cache;
};

// Dimension 0: bad iff f(x) = e^1. Dimension i: bad iff the value set over
// the corners is exactly {e^1, ..., e^{i+1}} and the number of bad
// (i-1)-dimensional faces is odd.
bool is_bad_cube(const UnitCube& c, const DirectionLookup& f, BadCubeMemo* memo = nullptr);

// Counts bad (d-1)-dimensional unit cubes all of whose corners lie on the
// boundary of `box`. An odd count certifies a zero point inside.
std::int64_t boundary_bad_count(const Cube& box, const DirectionLookup& f);
int boundary_bad_parity(const Cube& box, const DirectionLookup& f);

struct BrouwerRunReport {
  GridPoint solution;
  std::int64_t rounds_used = 0;
  std::int64_t queries_used = 0;
};

// Constant-round solver on a padded field session (exactly one boundary-bad
// face on the outer boundary). Round i < k queries shared sub-cube walls of
// the current cube and recurses into an odd-parity sub-cube; round k scans
// the remaining cube for the zero point.
BrouwerRunReport const_rounds_brouwer(FieldSession& session, int k);

// 1D interval solver: keeps the sub-interval with a queried fixed point or
// with both endpoints pointing inwards.
BrouwerRunReport one_d_brouwer(FieldSession& session, int k);

bool verify_zero(const FieldSession& s, const GridPoint& x);
bool verify_zero(const DirectionField& f, const GridPoint& x);

}  // namespace gridlab
