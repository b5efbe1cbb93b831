#include "gridlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include "gridlab/brouwer.hpp"
#include "gridlab/oracle.hpp"
#include "gridlab/rng.hpp"

namespace gridlab {

std::optional<AlgId> parse_alg(std::string_view name) {
  if (name == "const_ls") return AlgId::const_ls;
  if (name == "poly_ls") return AlgId::poly_ls;
  if (name == "warm_start") return AlgId::warm_start;
  if (name == "log_dnc") return AlgId::log_dnc;
  if (name == "one_d_ls") return AlgId::one_d_ls;
  if (name == "const_brouwer") return AlgId::const_brouwer;
  if (name == "one_d_brouwer") return AlgId::one_d_brouwer;
  return std::nullopt;
}

std::string_view alg_name(AlgId id) {
  switch (id) {
    case AlgId::const_ls: return "const_ls";
    case AlgId::poly_ls: return "poly_ls";
    case AlgId::warm_start: return "warm_start";
    case AlgId::log_dnc: return "log_dnc";
    case AlgId::one_d_ls: return "one_d_ls";
    case AlgId::const_brouwer: return "const_brouwer";
    case AlgId::one_d_brouwer: return "one_d_brouwer";
  }
  return "?";
}

namespace {

std::string format_alpha(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", a);
  return buf;
}

SessionLimits limits_for(const RunSpec& spec, std::optional<std::int64_t> natural_rounds) {
  SessionLimits lim;
  if (!spec.unlimited_rounds) {
    if (spec.round_limit)
      lim.round_limit = spec.round_limit;
    else
      lim.round_limit = natural_rounds;
  }
  lim.query_budget = spec.query_budget;
  return lim;
}

}  // namespace

std::string RunRow::to_csv() const {
  std::string out;
  out += algorithm;
  out += ',';
  out += std::to_string(d);
  out += ',';
  out += std::to_string(n);
  out += ',';
  out += k_or_alpha;
  out += ',';
  out += std::to_string(seed);
  out += ',';
  out += std::to_string(rounds_used);
  out += ',';
  out += std::to_string(queries_used);
  out += ',';
  out += std::to_string(success);
  out += ',';
  out += solution;
  return out;
}

TrialOutput run_trial_full(const RunSpec& spec) {
  TrialOutput out;
  RunRow& row = out.row;
  row.algorithm = std::string(alg_name(spec.alg));
  row.d = spec.d;
  row.seed = spec.seed;
  row.k_or_alpha = spec.alg == AlgId::poly_ls ? format_alpha(spec.alpha) : std::to_string(spec.k);
  row.solution = "-";

  switch (spec.alg) {
    case AlgId::const_ls: {
      auto inst = std::make_shared<StaircaseInstance>(
          gen_const_staircase(spec.n, spec.d, spec.k, spec.seed));
      row.n = inst->grid_side;
      ValueSession session = make_value_session(inst, limits_for(spec, spec.k));
      try {
        const RunReport rep = const_rounds_ls(session, spec.k);
        row.rounds_used = rep.rounds_used;
        row.queries_used = rep.queries_used;
        row.success = verify_local_min(session, rep.solution) ? 1 : 0;
        row.solution = rep.solution.to_string('-');
      } catch (const OracleError&) {
        row.rounds_used = session.ledger().round_count();
        row.queries_used = session.ledger().total_queries();
      }
      out.ledger_csv = session.ledger().to_csv();
      break;
    }
    case AlgId::poly_ls: {
      auto inst = std::make_shared<StaircaseInstance>(
          gen_poly_staircase(spec.n, spec.d, spec.alpha, spec.seed));
      row.n = spec.n;
      const auto natural =
          static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(spec.n), spec.alpha)));
      ValueSession session = make_value_session(inst, limits_for(spec, natural));
      try {
        const RunReport rep = poly_rounds_ls(session, spec.alpha, spec.sample_const,
                                             mix64(spec.seed ^ 0xa1507ull), &out.poly_trace);
        row.rounds_used = rep.rounds_used;
        row.queries_used = rep.queries_used;
        row.success = verify_local_min(session, rep.solution) ? 1 : 0;
        row.solution = rep.solution.to_string('-');
      } catch (const OracleError&) {
        row.rounds_used = session.ledger().round_count();
        row.queries_used = session.ledger().total_queries();
      }
      out.ledger_csv = session.ledger().to_csv();
      break;
    }
    case AlgId::warm_start: {
      auto inst = std::make_shared<StaircaseInstance>(
          gen_const_staircase(spec.n, spec.d, spec.k, spec.seed));
      row.n = inst->grid_side;
      ValueSession session = make_value_session(inst, limits_for(spec, std::nullopt));
      const double volume = std::pow(static_cast<double>(inst->grid_side), spec.d);
      const std::int64_t t =
          std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::sqrt(2.0 * spec.d * volume))));
      try {
        const RunReport rep = baseline_warm_start(session, t, mix64(spec.seed ^ 0x3a3full));
        row.rounds_used = rep.rounds_used;
        row.queries_used = rep.queries_used;
        row.success = verify_local_min(session, rep.solution) ? 1 : 0;
        row.solution = rep.solution.to_string('-');
      } catch (const OracleError&) {
        row.rounds_used = session.ledger().round_count();
        row.queries_used = session.ledger().total_queries();
      }
      out.ledger_csv = session.ledger().to_csv();
      break;
    }
    case AlgId::log_dnc: {
      auto inst = std::make_shared<StaircaseInstance>(
          gen_const_staircase(spec.n, spec.d, spec.k, spec.seed));
      row.n = inst->grid_side;
      ValueSession session = make_value_session(inst, limits_for(spec, std::nullopt));
      try {
        const RunReport rep = baseline_log_rounds_dnc(session);
        row.rounds_used = rep.rounds_used;
        row.queries_used = rep.queries_used;
        row.success = verify_local_min(session, rep.solution) ? 1 : 0;
        row.solution = rep.solution.to_string('-');
      } catch (const OracleError&) {
        row.rounds_used = session.ledger().round_count();
        row.queries_used = session.ledger().total_queries();
      }
      out.ledger_csv = session.ledger().to_csv();
      break;
    }
    case AlgId::one_d_ls: {
      Rng rng = Rng(spec.seed).split(0x1d);
      const Coord i = 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(spec.n)));
      const OneDHardInstance inst = gen_1d_hard(spec.n, i, OneDKind::local_search);
      row.d = 1;
      row.n = spec.n;
      ValueSession session = make_value_session(inst, limits_for(spec, spec.k));
      try {
        const RunReport rep = one_d_ls(session, spec.k);
        row.rounds_used = rep.rounds_used;
        row.queries_used = rep.queries_used;
        row.success = verify_local_min(session, rep.solution) ? 1 : 0;
        row.solution = rep.solution.to_string('-');
      } catch (const OracleError&) {
        row.rounds_used = session.ledger().round_count();
        row.queries_used = session.ledger().total_queries();
      }
      out.ledger_csv = session.ledger().to_csv();
      break;
    }
    case AlgId::const_brouwer: {
      Rng rng = Rng(spec.seed).split(0xb0);
      GridPoint target(spec.d, 0);
      for (int a = 0; a < spec.d; ++a)
        target[a] = 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(spec.n)));
      const DirectionField field = pad_brouwer(gen_sink_field(spec.n, spec.d, target));
      row.n = spec.n;
      FieldSession session = make_field_session(field, limits_for(spec, spec.k));
      try {
        const BrouwerRunReport rep = const_rounds_brouwer(session, spec.k);
        row.rounds_used = rep.rounds_used;
        row.queries_used = rep.queries_used;
        row.success = verify_zero(session, rep.solution) ? 1 : 0;
        row.solution = rep.solution.to_string('-');
      } catch (const OracleError&) {
        row.rounds_used = session.ledger().round_count();
        row.queries_used = session.ledger().total_queries();
      }
      out.ledger_csv = session.ledger().to_csv();
      break;
    }
    case AlgId::one_d_brouwer: {
      Rng rng = Rng(spec.seed).split(0xb1);
      const Coord i = 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(spec.n)));
      const OneDHardInstance inst = gen_1d_hard(spec.n, i, OneDKind::brouwer);
      row.d = 1;
      row.n = spec.n;
      FieldSession session = make_field_session(inst, limits_for(spec, spec.k));
      try {
        const BrouwerRunReport rep = one_d_brouwer(session, spec.k);
        row.rounds_used = rep.rounds_used;
        row.queries_used = rep.queries_used;
        row.success = verify_zero(session, rep.solution) ? 1 : 0;
        row.solution = rep.solution.to_string('-');
      } catch (const OracleError&) {
        row.rounds_used = session.ledger().round_count();
        row.queries_used = session.ledger().total_queries();
      }
      out.ledger_csv = session.ledger().to_csv();
      break;
    }
  }
  return out;
}

RunRow run_trial(const RunSpec& spec) { return run_trial_full(spec).row; }

namespace {

int thread_count() {
  if (const char* env = std::getenv("GRIDLAB_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.ns.empty()) throw DomainError("sweep needs at least one n value");
  for (std::size_t i = 1; i < spec.ns.size(); ++i)
    if (spec.ns[i] <= spec.ns[i - 1]) throw DomainError("n values must be strictly increasing");
  if (spec.trials < 1) throw DomainError("trials must be >= 1");

  std::vector<RunSpec> jobs;
  for (Coord n : spec.ns)
    for (int t = 0; t < spec.trials; ++t) {
      RunSpec rs = spec.base;
      rs.n = n;
      rs.seed = spec.seed_base + static_cast<std::uint64_t>(t);
      jobs.push_back(rs);
    }

  std::vector<RunRow> rows(jobs.size());
  const int threads = std::min<int>(thread_count(), static_cast<int>(jobs.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) rows[i] = run_trial(jobs[i]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = static_cast<std::size_t>(w); i < jobs.size();
             i += static_cast<std::size_t>(threads))
          rows[i] = run_trial(jobs[i]);
      });
    for (auto& th : pool) th.join();
  }

  std::stable_sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) {
    if (a.n != b.n) return a.n < b.n;
    return a.seed < b.seed;
  });

  SweepResult result;
  result.rows = std::move(rows);

  std::map<Coord, AggregateRow> agg;
  for (const RunRow& r : result.rows) {
    AggregateRow& a = agg[r.n];
    a.n = r.n;
    ++a.trials;
    a.mean_queries += static_cast<double>(r.queries_used);
    a.max_queries = std::max(a.max_queries, r.queries_used);
    a.mean_rounds += static_cast<double>(r.rounds_used);
    a.success_rate += r.success;
  }
  for (auto& [n, a] : agg) {
    a.mean_queries /= a.trials;
    a.mean_rounds /= a.trials;
    a.success_rate /= a.trials;
    result.agg.push_back(a);
  }
  return result;
}

std::string SweepResult::rows_csv() const {
  std::string out{kCsvHeader};
  out += '\n';
  for (const RunRow& r : rows) {
    out += r.to_csv();
    out += '\n';
  }
  return out;
}

std::string SweepResult::agg_csv() const {
  std::string out = "n,trials,mean_queries,max_queries,mean_rounds,success_rate\n";
  char buf[128];
  for (const AggregateRow& a : agg) {
    std::snprintf(buf, sizeof buf, "%lld,%d,%.3f,%lld,%.3f,%.4f\n",
                  static_cast<long long>(a.n), a.trials, a.mean_queries,
                  static_cast<long long>(a.max_queries), a.mean_rounds, a.success_rate);
    out += buf;
  }
  return out;
}

FitResult fit_trials_csv(const std::string& csv_text, double predicted_exponent) {
  std::istringstream is(csv_text);
  std::string line;
  std::map<Coord, std::pair<double, std::int64_t>> byn;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (first && line.rfind("algorithm,", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const std::size_t c = line.find(',', pos);
      fields.push_back(line.substr(pos, c == std::string::npos ? c : c - pos));
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    if (fields.size() < 7) throw DomainError("malformed CSV row: " + line);
    Coord n = 0;
    std::int64_t q = 0;
    try {
      n = std::stoll(fields[2]);
      q = std::stoll(fields[6]);
    } catch (const std::exception&) {
      throw DomainError("malformed CSV row: " + line);
    }
    auto& [sum, cnt] = byn[n];
    sum += static_cast<double>(q);
    ++cnt;
  }
  if (byn.size() < 3) throw DomainError("fit requires >= 3 distinct n values");
  std::vector<double> xs, ys;
  for (const auto& [n, sc] : byn) {
    xs.push_back(static_cast<double>(n));
    ys.push_back(sc.first / static_cast<double>(sc.second));
  }
  return fit_power_law(xs, ys, predicted_exponent);
}

}  // namespace gridlab
