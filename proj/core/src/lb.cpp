#include "gridlab/lb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridlab/rng.hpp"

namespace gridlab {

Rational Rational::of(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw DomainError("rational with non-positive denominator");
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

Rational Rational::operator+(const Rational& o) const {
  const __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
  const __int128 d = static_cast<__int128>(den) * o.den;
  if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
    throw ScaleGuardError("rational overflow");
  return Rational::of(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

bool Rational::operator<=(const Rational& o) const {
  return static_cast<__int128>(num) * o.den <= static_cast<__int128>(o.num) * den;
}

LbSetup make_lb_setup(const std::vector<Coord>& schedule, int d, std::int64_t per_round_budget) {
  LbSetup s;
  s.d = d;
  s.schedule = schedule;
  s.m = 0;
  for (Coord l : schedule) s.m += l;
  s.rounds = static_cast<int>(schedule.size());
  s.per_round_budget = per_round_budget;
  return s;
}

namespace {

struct ZeroQuery final : AlgorithmUnderTest {
  std::string name() const override { return "zero_query"; }
  void reset(const LbSetup&) override {}
  std::vector<GridPoint> next_batch(int) override { return {}; }
  void receive(int, const std::vector<std::int64_t>&, const std::optional<GridPoint>&) override {}
};

struct UniformBoundaryDnc final : AlgorithmUnderTest {
  LbSetup setup;
  Cube current;
  std::vector<Cube> subs;
  std::vector<GridPoint> last_batch;
  std::unordered_map<GridPoint, std::int64_t, GridPointHash> known;

  std::string name() const override { return "uniform_boundary_dnc"; }

  void reset(const LbSetup& s) override {
    setup = s;
    current = full_grid(s.d, s.m);
    subs.clear();
    last_batch.clear();
    known.clear();
  }

  std::vector<GridPoint> next_batch(int round) override {
    std::vector<GridPoint> batch;
    if (round < setup.rounds) {
      const Coord side = setup.schedule[static_cast<std::size_t>(round)];
      subs = partition_cube(current, side);
      for (const Cube& c : subs)
        c.for_each_boundary_point([&](const GridPoint& p) { batch.push_back(p); });
    } else {
      subs.clear();
      current.for_each_point([&](const GridPoint& p) { batch.push_back(p); });
    }
    if (setup.per_round_budget > 0 &&
        static_cast<std::int64_t>(batch.size()) > setup.per_round_budget) {
      // Thin uniformly and deterministically to the budget.
      std::vector<GridPoint> kept;
      const std::size_t total = batch.size();
      const std::size_t want = static_cast<std::size_t>(setup.per_round_budget);
      for (std::size_t i = 0; i < want; ++i)
        kept.push_back(batch[i * total / want]);
      batch = std::move(kept);
    }
    last_batch = batch;
    return batch;
  }

  void receive(int round, const std::vector<std::int64_t>& answers,
               const std::optional<GridPoint>&) override {
    for (std::size_t i = 0; i < last_batch.size(); ++i) known[last_batch[i]] = answers[i];
    if (round >= setup.rounds || last_batch.empty()) return;
    const GridPoint* best = nullptr;
    for (const GridPoint& p : last_batch) {
      if (!best || known.at(p) < known.at(*best) || (known.at(p) == known.at(*best) && p < *best))
        best = &p;
    }
    for (const Cube& c : subs)
      if (c.contains(*best)) {
        current = c;
        break;
      }
  }
};

struct FullScan final : AlgorithmUnderTest {
  LbSetup setup;
  std::string name() const override { return "full_scan_round1"; }
  void reset(const LbSetup& s) override { setup = s; }
  std::vector<GridPoint> next_batch(int round) override {
    std::vector<GridPoint> batch;
    if (round == 1)
      full_grid(setup.d, setup.m).for_each_point([&](const GridPoint& p) { batch.push_back(p); });
    return batch;
  }
  void receive(int, const std::vector<std::int64_t>&, const std::optional<GridPoint>&) override {}
};

}  // namespace

std::unique_ptr<AlgorithmUnderTest> make_zero_query_algorithm() {
  return std::make_unique<ZeroQuery>();
}

std::unique_ptr<AlgorithmUnderTest> make_uniform_boundary_dnc() {
  return std::make_unique<UniformBoundaryDnc>();
}

std::unique_ptr<AlgorithmUnderTest> make_full_scan_algorithm() {
  return std::make_unique<FullScan>();
}

Transcript simulate_transcript(AlgorithmUnderTest& aut, const LbSetup& setup,
                               const StaircaseInstance& s) {
  const int length = static_cast<int>(s.connecting.size()) - 1;
  aut.reset(setup);
  Transcript t;
  for (int r = 1; r <= setup.rounds; ++r) {
    std::vector<GridPoint> batch = aut.next_batch(r);
    std::vector<std::int64_t> answers;
    answers.reserve(batch.size());
    for (const GridPoint& p : batch) answers.push_back(s.value_at(p));
    std::optional<GridPoint> revealed;
    if (r < length) revealed = s.connecting[static_cast<std::size_t>(r)];
    t.batches.push_back(batch);
    aut.receive(r, answers, revealed);
  }
  return t;
}

bool classify_good(const Transcript& t, const StaircaseInstance& s) {
  const int length = static_cast<int>(s.connecting.size()) - 1;
  if (length <= 1) return true;
  // segment_of(q) = j+1 when q lies on FS(x_j, x_{j+1}); a query in round r
  // breaks goodness iff its segment index is >= r+1.
  std::unordered_map<GridPoint, int, GridPointHash> segment_of;
  for (int j = 1; j <= length; ++j) {
    FoldedSegment fs(s.connecting[static_cast<std::size_t>(j) - 1],
                     s.connecting[static_cast<std::size_t>(j)],
                     s.kind == StairKind::poly_round ? s.n : 0);
    fs.for_each([&](const GridPoint& p, std::int64_t) { segment_of[p] = j; });
  }
  const int rounds = static_cast<int>(t.batches.size());
  for (int r = 1; r <= std::min(rounds, length - 1); ++r) {
    for (const GridPoint& q : t.batches[static_cast<std::size_t>(r) - 1]) {
      auto it = segment_of.find(q);
      if (it != segment_of.end() && it->second >= r + 1) return false;
    }
  }
  return true;
}

bool classify_good(AlgorithmUnderTest& aut, const LbSetup& setup, const StaircaseInstance& s) {
  return classify_good(simulate_transcript(aut, setup, s), s);
}

void for_each_staircase(const LbSetup& setup, int len,
                        const std::function<void(const std::vector<std::vector<Coord>>&,
                                                 const StaircaseInstance&)>& fn) {
  std::vector<std::vector<Coord>> offsets(
      static_cast<std::size_t>(len), std::vector<Coord>(static_cast<std::size_t>(setup.d), 0));
  std::function<void(int, int)> rec = [&](int step, int axis) {
    if (step == len) {
      // The end value is irrelevant to goodness unless the end is queried
      // early, which already breaks goodness; classify on the minus branch.
      fn(offsets, const_staircase_from_offsets(setup.schedule, setup.d, offsets, -1));
      return;
    }
    if (axis == setup.d) {
      rec(step + 1, 0);
      return;
    }
    for (Coord v = 0; v < setup.schedule[static_cast<std::size_t>(step)]; ++v) {
      offsets[static_cast<std::size_t>(step)][static_cast<std::size_t>(axis)] = v;
      rec(step, axis + 1);
    }
  };
  rec(0, 0);
}

GoodnessReport enumerate_goodness(AlgorithmUnderTest& aut, const LbSetup& setup,
                                  std::int64_t scale_guard) {
  std::int64_t total_work = 0;
  std::int64_t level = 1;
  for (int i = 0; i <= setup.rounds; ++i) {
    total_work += level;
    if (total_work > scale_guard) throw ScaleGuardError("staircase enumeration too large");
    if (i < setup.rounds)
      for (int a = 0; a < setup.d; ++a)
        level = checked_mul(level, setup.schedule[static_cast<std::size_t>(i)]);
  }

  GoodnessReport report;
  for (int len = 0; len <= setup.rounds; ++len) {
    GoodnessRow row;
    row.length = len;
    for_each_staircase(setup, len,
                       [&](const std::vector<std::vector<Coord>>&, const StaircaseInstance& s) {
                         ++row.total;
                         if (classify_good(aut, setup, s)) ++row.good;
                       });
    row.fraction = row.total ? static_cast<double>(row.good) / static_cast<double>(row.total) : 1.0;
    report.rows.push_back(row);
  }
  return report;
}

std::string GoodnessReport::to_csv() const {
  std::string out = "length,total,good,fraction\n";
  char buf[64];
  for (const GoodnessRow& r : rows) {
    out += std::to_string(r.length);
    out += ',';
    out += std::to_string(r.total);
    out += ',';
    out += std::to_string(r.good);
    out += ',';
    std::snprintf(buf, sizeof buf, "%.6f", r.fraction);
    out += buf;
    out += '\n';
  }
  return out;
}

Rational probability_score(const GridPoint& x,
                           const std::unordered_set<GridPoint, GridPointHash>& queried,
                           Coord ell) {
  if (ell < 1) throw DomainError("ell must be >= 1");
  std::int64_t den = 1;
  for (int a = 0; a < x.dim(); ++a) den = checked_mul(den, ell);
  std::int64_t clear = 0;
  corner_window(x, ell).for_each_point([&](const GridPoint& y) {
    FoldedSegment fs(x, y);
    bool hit = false;
    fs.for_each([&](const GridPoint& z, std::int64_t) {
      if (!hit && queried.count(z)) hit = true;
    });
    if (!hit) ++clear;
  });
  return Rational::of(clear, den);
}

CostLemmaResult verify_cost_lemma(const GridPoint& y, Coord ell, Coord m, int d,
                                  std::int64_t scale_guard) {
  if (y.dim() != d) throw DomainError("dimension mismatch");
  std::int64_t grid = 1;
  for (int a = 0; a < d; ++a) grid = checked_mul(grid, m);
  if (grid > scale_guard) throw ScaleGuardError("cost lemma grid too large");

  std::int64_t den = 1;
  for (int a = 0; a < d; ++a) den = checked_mul(den, ell);

  const Cube domain = full_grid(d, m);
  std::int64_t total_num = 0;
  // x ranges over corners with y in W(x): per axis x_a in [y_a - ell + 1, y_a].
  GridPoint x(d, 0);
  std::function<void(int)> rec = [&](int axis) {
    if (axis == d) {
      corner_window(x, ell).for_each_point([&](const GridPoint& z) {
        if (!domain.contains(z)) return;
        if (FoldedSegment(x, z).contains(y)) ++total_num;
      });
      return;
    }
    for (Coord v = std::max<Coord>(1, y[axis] - ell + 1); v <= y[axis]; ++v) {
      x[axis] = v;
      rec(axis + 1);
    }
  };
  rec(0);

  CostLemmaResult res;
  res.total = Rational::of(total_num, den);
  res.bound = static_cast<std::int64_t>(d) * ell;
  res.pass = res.total <= Rational::of(res.bound, 1);
  return res;
}

namespace {

// One step of the polynomial-round walk: connecting point with absolute index
// `j` drawn from the window of the previous point, or uniformly on a resample
// step (j mod m == 0).
GridPoint walk_step(Rng& rng, const GridPoint& cur, std::int64_t j, Coord n, Coord ell,
                    Coord m_period) {
  GridPoint next = cur;
  if (m_period > 0 && j % m_period == 0) {
    for (int a = 0; a < cur.dim(); ++a)
      next[a] = 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(n)));
  } else {
    for (int a = 0; a < cur.dim(); ++a)
      next[a] = wrap_coord(cur[a] + 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(ell))), n);
  }
  return next;
}

}  // namespace

WalkFreq estimate_q(int d, Coord n, Coord ell, Coord m_period, const GridPoint& x,
                    const GridPoint& y, std::int64_t i, std::int64_t t, std::int64_t samples,
                    std::uint64_t seed) {
  if (t < 1 || samples < 1) throw DomainError("bad estimator parameters");
  if (x.dim() != d || y.dim() != d) throw DomainError("dimension mismatch");
  Rng base(seed);
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    Rng rng = base.split(static_cast<std::uint64_t>(s));
    GridPoint cur = x;
    for (std::int64_t step = 1; step <= t; ++step)
      cur = walk_step(rng, cur, i + step, n, ell, m_period);
    if (cur == y) ++hits;
  }
  WalkFreq f;
  f.hits = hits;
  f.samples = samples;
  f.p_hat = static_cast<double>(hits) / static_cast<double>(samples);
  f.se = std::sqrt(std::max(f.p_hat * (1.0 - f.p_hat), 1e-12) / static_cast<double>(samples));
  return f;
}

WalkFreq estimate_p(int d, Coord n, Coord ell, Coord m_period, const GridPoint& x,
                    const GridPoint& y, std::int64_t i, std::int64_t t, std::int64_t samples,
                    std::uint64_t seed) {
  if (t < 2) throw DomainError("forward estimation of p needs t >= 2");
  if (samples < 1) throw DomainError("bad estimator parameters");
  if (x.dim() != d || y.dim() != d) throw DomainError("dimension mismatch");
  Rng base(seed ^ 0x70657374u);
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    Rng rng = base.split(static_cast<std::uint64_t>(s));
    GridPoint prev = x, cur = x;
    for (std::int64_t step = 1; step <= t - 1; ++step) {
      prev = cur;
      cur = walk_step(rng, cur, i + step, n, ell, m_period);
    }
    // y on the (i+t-1)-th folded segment, i.e. the one into x_{i+t-1}.
    if (FoldedSegment(prev, cur, n).contains(y)) ++hits;
  }
  WalkFreq f;
  f.hits = hits;
  f.samples = samples;
  f.p_hat = static_cast<double>(hits) / static_cast<double>(samples);
  f.se = std::sqrt(std::max(f.p_hat * (1.0 - f.p_hat), 1e-12) / static_cast<double>(samples));
  return f;
}

GammaEstimate estimate_gamma(int d, Coord ell, Coord m_period, std::int64_t K, std::int64_t i,
                             std::int64_t samples, std::uint64_t seed) {
  if (i < 0 || i >= K) throw DomainError("need 0 <= i < K");
  if (samples < 2) throw DomainError("need at least 2 samples");
  const Coord n = ell * m_period;
  const GridPoint one(d, 1);

  // Pass 1: accumulate sum_t (t-1) * 1[y on segment i+t-1] per visited point
  // to locate the empirically best candidate y.
  std::unordered_map<GridPoint, std::int64_t, GridPointHash> acc;
  Rng base(seed);
  const std::int64_t half = samples / 2;
  for (std::int64_t s = 0; s < half; ++s) {
    Rng rng = base.split(static_cast<std::uint64_t>(s));
    GridPoint prev = one, cur = one;
    for (std::int64_t j = i + 1; j <= K - 1; ++j) {  // segment j covers t = j - i + 1
      prev = cur;
      cur = walk_step(rng, cur, j, n, ell, m_period);
      const std::int64_t weight = j - i;  // (t - 1)
      FoldedSegment(prev, cur, n).for_each(
          [&](const GridPoint& z, std::int64_t) { acc[z] += weight; });
    }
  }
  GammaEstimate out;
  out.argmax_y = one;
  std::int64_t best = -1;
  for (const auto& [p, v] : acc)
    if (v > best || (v == best && p < out.argmax_y)) {
      best = v;
      out.argmax_y = p;
    }
  if (best < 0) {  // no segments at all (i == K-1 with nothing to walk)
    out.gamma_hat = 0.0;
    out.se = 0.0;
    return out;
  }

  // Pass 2: fresh substream, per-sample totals at the chosen candidate.
  Rng base2 = Rng(seed).split(0x67616d6d61ull);
  const std::int64_t rest = samples - half;
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t s = 0; s < rest; ++s) {
    Rng rng = base2.split(static_cast<std::uint64_t>(s));
    GridPoint prev = one, cur = one;
    std::int64_t contrib = 0;
    for (std::int64_t j = i + 1; j <= K - 1; ++j) {
      prev = cur;
      cur = walk_step(rng, cur, j, n, ell, m_period);
      if (FoldedSegment(prev, cur, n).contains(out.argmax_y)) contrib += j - i;
    }
    sum += static_cast<double>(contrib);
    sumsq += static_cast<double>(contrib) * static_cast<double>(contrib);
  }
  const double mean = sum / static_cast<double>(rest);
  const double var = std::max(0.0, sumsq / static_cast<double>(rest) - mean * mean);
  out.gamma_hat = mean;
  out.se = std::sqrt(var / static_cast<double>(rest));
  return out;
}

}  // namespace gridlab
