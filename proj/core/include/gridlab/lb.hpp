#pragma once

// Executable lower-bound machinery: exhaustive staircase enumeration with
// goodness classification against pluggable deterministic algorithms, exact
// probability scores and cost sums, and Monte Carlo estimators for the
// random-walk quantities. The simulation oracle grants the location of each
// connecting point after its round, which is distinct from (and stronger for
// the algorithm than) the production oracle protocol.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gridlab/geometry.hpp"
#include "gridlab/instances.hpp"

namespace gridlab {

// Exact rational arithmetic for the lemma checks; the inequalities are exact
// and floating error would blur near-boundary cases.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational of(std::int64_t num, std::int64_t den);
  Rational operator+(const Rational& o) const;
  bool operator<=(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct LbSetup {
  int d = 0;
  std::vector<Coord> schedule;  // window sides ell_0 .. ell_{k-1}
  Coord m = 0;                  // grid side (sum of the schedule)
  int rounds = 0;               // simulation rounds (k)
  std::int64_t per_round_budget = 0;  // 0 = unlimited
};

LbSetup make_lb_setup(const std::vector<Coord>& schedule, int d, std::int64_t per_round_budget = 0);

// A deterministic round-batch strategy. Determinism is part of the contract:
// identical histories must yield identical next batches.
class AlgorithmUnderTest {
 public:
  virtual ~AlgorithmUnderTest() = default;
  virtual std::string name() const = 0;
  virtual void reset(const LbSetup& setup) = 0;
  virtual std::vector<GridPoint> next_batch(int round) = 0;  // 1-based round
  virtual void receive(int round, const std::vector<std::int64_t>& answers,
                       const std::optional<GridPoint>& revealed) = 0;
};

std::unique_ptr<AlgorithmUnderTest> make_zero_query_algorithm();
// Algorithm-1-style strategy that queries sub-cube boundaries per round,
// thinned deterministically to the per-round budget.
std::unique_ptr<AlgorithmUnderTest> make_uniform_boundary_dnc();
// Queries the entire grid in round 1 and nothing afterwards; only length-1
// staircases stay good against it.
std::unique_ptr<AlgorithmUnderTest> make_full_scan_algorithm();

struct Transcript {
  std::vector<std::vector<GridPoint>> batches;
};

Transcript simulate_transcript(AlgorithmUnderTest& aut, const LbSetup& setup,
                               const StaircaseInstance& s);

// True iff no point of any folded segment after connecting point x_j is
// queried in rounds 1..j, for every 0 < j < length.
bool classify_good(const Transcript& t, const StaircaseInstance& s);
bool classify_good(AlgorithmUnderTest& aut, const LbSetup& setup, const StaircaseInstance& s);

struct GoodnessRow {
  int length = 0;
  std::int64_t total = 0;
  std::int64_t good = 0;
  double fraction = 0.0;
};

struct GoodnessReport {
  std::vector<GoodnessRow> rows;
  std::string to_csv() const;  // length,total,good,fraction
};

// Exhaustively enumerates all staircases of every length 0..k over the setup's
// schedule (all window-offset tuples) and classifies each one.
GoodnessReport enumerate_goodness(AlgorithmUnderTest& aut, const LbSetup& setup,
                                  std::int64_t scale_guard = 10000000);

// Enumerates all length-`len` staircases, calling fn(offsets, instance).
void for_each_staircase(const LbSetup& setup, int len,
                        const std::function<void(const std::vector<std::vector<Coord>>&,
                                                 const StaircaseInstance&)>& fn);

// SC_i(x, Q): fraction of window targets y whose folded segment FS(x, y)
// avoids every queried point.
Rational probability_score(const GridPoint& x,
                           const std::unordered_set<GridPoint, GridPointHash>& queried,
                           Coord ell);

struct CostLemmaResult {
  Rational total;         // sum over x of |B_i(x, y)| / ell^d
  std::int64_t bound = 0; // d * ell
  bool pass = false;
};

// Exact enumeration of the total cost a queried point y incurs across all
// window corners x on the side-m grid.
CostLemmaResult verify_cost_lemma(const GridPoint& y, Coord ell, Coord m, int d,
                                  std::int64_t scale_guard = 10000000);

// Monte Carlo estimators over the polynomial-round walk (torus side n =
// ell * m_period, resample every m_period-th step).

struct WalkFreq {
  double p_hat = 0.0;
  double se = 0.0;
  std::int64_t hits = 0;
  std::int64_t samples = 0;
};

// q(x, y, i, t): probability y is the (i+t)-th connecting point given the
// i-th is x.
WalkFreq estimate_q(int d, Coord n, Coord ell, Coord m_period, const GridPoint& x,
                    const GridPoint& y, std::int64_t i, std::int64_t t, std::int64_t samples,
                    std::uint64_t seed);
// p(x, y, i, t): probability y lies on the (i+t-1)-th folded segment given
// the i-th connecting point is x; forward estimation needs t >= 2.
WalkFreq estimate_p(int d, Coord n, Coord ell, Coord m_period, const GridPoint& x,
                    const GridPoint& y, std::int64_t i, std::int64_t t, std::int64_t samples,
                    std::uint64_t seed);

struct GammaEstimate {
  double gamma_hat = 0.0;
  double se = 0.0;
  GridPoint argmax_y;
};

// Estimates Gamma(i) = max_y sum_t (t-1) p(1, y, i, t) at the empirically
// best candidate y. An estimate with a standard error, never a certified max.
GammaEstimate estimate_gamma(int d, Coord ell, Coord m_period, std::int64_t K, std::int64_t i,
                             std::int64_t samples, std::uint64_t seed);

}  // namespace gridlab
