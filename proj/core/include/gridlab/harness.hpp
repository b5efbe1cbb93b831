#pragma once

// Uniform run descriptors: (algorithm id, params) -> one CSV row per trial,
// sweeps with aggregation, and fitting straight off the trial CSV. The CLI is
// a thin wrapper over this layer, so tests can byte-compare outputs without
// spawning processes.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridlab/fit.hpp"
#include "gridlab/geometry.hpp"
#include "gridlab/instances.hpp"
#include "gridlab/search.hpp"

namespace gridlab {

enum class AlgId {
  const_ls,
  poly_ls,
  warm_start,
  log_dnc,
  one_d_ls,
  const_brouwer,
  one_d_brouwer,
};

std::optional<AlgId> parse_alg(std::string_view name);
std::string_view alg_name(AlgId id);

struct RunSpec {
  AlgId alg = AlgId::const_ls;
  int d = 2;
  Coord n = 64;
  int k = 2;
  double alpha = 0.5;
  std::uint64_t seed = 1;
  std::optional<std::int64_t> query_budget;
  double sample_const = 100.0;
  // Round limit policy: by default round-limited algorithms get their natural
  // limit (k, or floor(n^alpha)); `unlimited_rounds` lifts it.
  std::optional<std::int64_t> round_limit;
  bool unlimited_rounds = false;
};

inline constexpr std::string_view kCsvHeader =
    "algorithm,d,n,k_or_alpha,seed,rounds_used,queries_used,success,solution";

struct RunRow {
  std::string algorithm;
  int d = 0;
  Coord n = 0;  // reported instance size (m for constant-round staircases)
  std::string k_or_alpha;
  std::uint64_t seed = 0;
  std::int64_t rounds_used = 0;
  std::int64_t queries_used = 0;
  int success = 0;
  std::string solution;  // dash-joined coordinates, or "-" on failure

  std::string to_csv() const;
};

struct TrialOutput {
  RunRow row;
  std::string ledger_csv;
  PolyRunTrace poly_trace;  // filled for poly_ls
};

RunRow run_trial(const RunSpec& spec);
TrialOutput run_trial_full(const RunSpec& spec);

struct SweepSpec {
  RunSpec base;
  std::vector<Coord> ns;  // strictly increasing
  int trials = 1;
  std::uint64_t seed_base = 1;
};

struct AggregateRow {
  Coord n = 0;
  int trials = 0;
  double mean_queries = 0.0;
  std::int64_t max_queries = 0;
  double mean_rounds = 0.0;
  double success_rate = 0.0;
};

struct SweepResult {
  std::vector<RunRow> rows;        // sorted by (n, seed)
  std::vector<AggregateRow> agg;   // one row per n
  std::string rows_csv() const;    // stable per-trial schema
  std::string agg_csv() const;
};

// Trials may run on GRIDLAB_THREADS worker threads; output order and content
// are independent of the thread count.
SweepResult run_sweep(const SweepSpec& spec);

// Parses the stable per-trial CSV, averages queries per n, and fits.
// Requires at least three distinct n values.
FitResult fit_trials_csv(const std::string& csv_text, double predicted_exponent);

}  // namespace gridlab
