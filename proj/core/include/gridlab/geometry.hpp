#pragma once

// Integer grid geometry: points, axis-aligned cubes, boundaries, folded
// segments and the wrap-around window sets used by the staircase generators.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridlab {

using Coord = std::int64_t;

// Dimension is a small compile-time-bounded runtime value; points are stored
// inline so the hot paths never allocate.
inline constexpr int kMaxDim = 8;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Guard for exhaustive modes whose work is proportional to n^d.
struct ScaleGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Multiplies with overflow check; throws ScaleGuardError on overflow.
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

class GridPoint {
 public:
  GridPoint() = default;
  GridPoint(std::initializer_list<Coord> cs);
  GridPoint(int dim, Coord fill);

  int dim() const { return d_; }
  Coord operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  Coord& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const GridPoint& a, const GridPoint& b) {
    if (a.d_ != b.d_) return false;
    for (int i = 0; i < a.d_; ++i)
      if (a.c_[static_cast<std::size_t>(i)] != b.c_[static_cast<std::size_t>(i)]) return false;
    return true;
  }
  // Lexicographic order; used for deterministic tie-breaking everywhere.
  friend std::strong_ordering operator<=>(const GridPoint& a, const GridPoint& b) {
    const int d = a.d_ < b.d_ ? a.d_ : b.d_;
    for (int i = 0; i < d; ++i) {
      if (auto c = a.c_[static_cast<std::size_t>(i)] <=> b.c_[static_cast<std::size_t>(i)];
          c != std::strong_ordering::equal)
        return c;
    }
    return a.d_ <=> b.d_;
  }

  std::string to_string(char sep = ',') const;

 private:
  std::array<Coord, kMaxDim> c_{};
  int d_ = 0;
};

std::ostream& operator<<(std::ostream& os, const GridPoint& p);

struct GridPointHash {
  std::size_t operator()(const GridPoint& p) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(p.dim());
    for (int i = 0; i < p.dim(); ++i) {
      std::uint64_t x = static_cast<std::uint64_t>(p[i]);
      x *= 0xbf58476d1ce4e5b9ull;
      x ^= x >> 31;
      h = (h ^ x) * 0x94d049bb133111ebull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

Coord l1_distance(const GridPoint& a, const GridPoint& b);
Coord linf_distance(const GridPoint& a, const GridPoint& b);

// Axis-aligned sub-box of the grid: low corner plus per-axis extent >= 1.
class Cube {
 public:
  Cube() = default;
  Cube(GridPoint low, GridPoint extent);
  static Cube from_corners(const GridPoint& lo, const GridPoint& hi);
  // Clipped L-inf ball C(x, s) within `domain`.
  static Cube centered(const GridPoint& x, Coord s, const Cube& domain);

  int dim() const { return low_.dim(); }
  const GridPoint& low() const { return low_; }
  Coord extent(int axis) const { return ext_[axis]; }
  Coord high(int axis) const { return low_[axis] + ext_[axis] - 1; }
  GridPoint high() const;
  std::int64_t volume() const;
  bool contains(const GridPoint& p) const;
  bool single_point() const;
  Coord max_extent() const;

  friend bool operator==(const Cube& a, const Cube& b) {
    if (a.low_ != b.low_) return false;
    for (int i = 0; i < a.dim(); ++i)
      if (a.ext_[i] != b.ext_[i]) return false;
    return true;
  }

  // Visits every point in lexicographic order.
  void for_each_point(const std::function<void(const GridPoint&)>& fn) const;
  // Visits exactly the points with fewer than 2d neighbors inside the cube.
  void for_each_boundary_point(const std::function<void(const GridPoint&)>& fn) const;
  std::vector<GridPoint> boundary_points() const;
  std::int64_t boundary_count() const;

 private:
  GridPoint low_;
  std::array<Coord, kMaxDim> ext_{};
};

std::ostream& operator<<(std::ostream& os, const Cube& c);

// All grid points at L1 distance exactly 1 from p inside `domain`.
std::vector<GridPoint> neighbors(const GridPoint& p, const Cube& domain);
// Convenience for the standard grid [1, n]^d.
std::vector<GridPoint> neighbors(const GridPoint& p, Coord n);

Cube full_grid(int d, Coord n);  // [1, n]^d

// Splits `c` into ceil(extent/side) blocks per axis; trailing blocks are
// smaller when `side` does not divide the extent. Blocks are returned in
// lexicographic order of their block indices and tile `c` exactly.
std::vector<Cube> partition_cube(const Cube& c, Coord side);

// The monotone axis-by-axis lattice path from `origin` to `target`, origin
// excluded. With wrap_n > 0 each axis moves in the increasing direction,
// wrapping from wrap_n to 1 (the torus convention of the random-walk
// staircases); otherwise each axis moves straight toward the target.
class FoldedSegment {
 public:
  FoldedSegment() = default;
  FoldedSegment(GridPoint origin, GridPoint target, Coord wrap_n = 0);

  const GridPoint& origin() const { return origin_; }
  const GridPoint& target() const { return target_; }
  std::int64_t length() const;  // number of points (origin excluded)
  bool empty() const { return length() == 0; }

  // Membership and 1-based traversal index without materializing the path.
  bool contains(const GridPoint& p) const { return index_of(p) > 0; }
  std::int64_t index_of(const GridPoint& p) const;  // 0 if not on the path

  // Visits the path in traversal order with 1-based indices.
  void for_each(const std::function<void(const GridPoint&, std::int64_t)>& fn) const;
  std::vector<GridPoint> materialize() const;

 private:
  Coord delta(int axis) const;  // steps along `axis`
  GridPoint origin_, target_;
  Coord wrap_n_ = 0;
};

// Appendix-B corner window: {y : x_j <= y_j < x_j + ell}, as a Cube.
Cube corner_window(const GridPoint& x, Coord ell);

// Wrap-around window machinery of the polynomial-round construction.
// All sets live on the torus [1, n]^d.
Coord wrap_coord(Coord v, Coord n);               // into [1, n]
GridPoint wrap_point(const GridPoint& p, Coord n);
bool in_w1(Coord x, Coord y, Coord ell, Coord n);  // y in W^1(x)

struct WindowSets {
  std::vector<std::vector<Coord>> w1;   // W^1(x_j) per axis
  std::vector<GridPoint> w;             // W(x), |w| == ell^d
  std::vector<std::vector<GridPoint>> w_inv;   // W^{-1}_i(x), i = 1..d
  std::vector<std::vector<GridPoint>> w_back;  // W^b_i(x), i = 1..d
  std::vector<GridPoint> w_r;           // union of the above, deduplicated
};

WindowSets window_sets(const GridPoint& x, Coord ell, Coord n);

}  // namespace gridlab
