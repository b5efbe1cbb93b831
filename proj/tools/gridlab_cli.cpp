// gridlab: query-complexity experiments for round-limited search on grids.
//
// Subcommands:
//   run        one seeded trial, emits the trial CSV row
//   sweep      trials x n-values, emits aggregates (per-trial CSV via --out)
//   fit        log-log exponent fit of a per-trial CSV against a theory curve
//   verify-lb  exhaustive goodness enumeration and cost-lemma checks
//   gen        write a staircase instance file
//
// Exit codes: 0 ok, 2 usage error, 3 lemma violation, 4 scale guard.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gridlab/brouwer.hpp"
#include "gridlab/harness.hpp"
#include "gridlab/lb.hpp"
#include "gridlab/oracle.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitViolation = 3;
constexpr int kExitScaleGuard = 4;

void write_out(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fputs(content.c_str(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw gridlab::DomainError("cannot open output file: " + path);
  f << content;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gridlab;

  CLI::App app{"query-complexity lab for local search and Brouwer fixed points on grids"};
  app.require_subcommand(1);

  std::string alg_str = "const_ls";
  int d = 2;
  std::vector<long long> ns = {64};
  int k = 2;
  double alpha = 0.5;
  std::uint64_t seed = 1;
  int trials = 1;
  long long budget = 0;
  double sample_const = 100.0;
  std::string out_path;
  std::string ledger_path;

  auto add_common = [&](CLI::App* cmd, bool multi_n) {
    cmd->add_option("--alg", alg_str, "algorithm id");
    cmd->add_option("--d", d, "dimension");
    if (multi_n)
      cmd->add_option("--n", ns, "grid side(s)");
    else
      cmd->add_option("--n", ns, "grid side")->expected(1);
    cmd->add_option("--k", k, "number of rounds");
    cmd->add_option("--alpha", alpha, "round exponent (k = n^alpha)");
    cmd->add_option("--seed", seed, "base seed");
    cmd->add_option("--budget", budget, "query budget (0 = unlimited)");
    cmd->add_option("--sample-const", sample_const, "round-1 sample constant");
    cmd->add_option("--out", out_path, "output file (default stdout)");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "run one trial");
  add_common(cmd_run, false);
  cmd_run->add_option("--trials", trials)->group("");  // accepted, ignored
  cmd_run->add_option("--ledger-out", ledger_path, "write the round ledger CSV here");

  std::string plot_path;
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(cmd_sweep, true);
  cmd_sweep->add_option("--trials", trials, "trials per n");
  cmd_sweep->add_option("--plot-out", plot_path,
                        "write gnuplot-ready `n mean_queries` columns here");

  std::string fit_csv_path;
  std::string theory = "const_ls";
  CLI::App* cmd_fit = app.add_subcommand("fit", "fit a power law to sweep output");
  cmd_fit->add_option("--csv", fit_csv_path, "per-trial CSV file")->required();
  cmd_fit->add_option("--theory", theory, "const_ls | poly_ls | one_d");
  cmd_fit->add_option("--d", d, "dimension");
  cmd_fit->add_option("--k", k, "rounds");
  cmd_fit->add_option("--alpha", alpha, "round exponent");

  std::vector<long long> ell_list = {4, 2};
  std::string lb_alg = "all";
  CLI::App* cmd_lb = app.add_subcommand("verify-lb", "exhaustive lower-bound machinery checks");
  cmd_lb->add_option("--d", d, "dimension");
  cmd_lb->add_option("--ell", ell_list, "window schedule, e.g. --ell 4 2");
  cmd_lb->add_option("--budget", budget, "per-round budget (0 = paper budget)");
  cmd_lb->add_option("--alg", lb_alg, "zero | uniform_dnc | full_scan | all");
  cmd_lb->add_option("--out", out_path, "output file (default stdout)");

  std::string gen_kind = "const_round";
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate an instance file");
  cmd_gen->add_option("--kind", gen_kind, "const_round | poly_round");
  cmd_gen->add_option("--d", d, "dimension");
  cmd_gen->add_option("--n", ns, "grid side")->expected(1);
  cmd_gen->add_option("--k", k, "rounds (const_round)");
  cmd_gen->add_option("--alpha", alpha, "round exponent (poly_round)");
  cmd_gen->add_option("--seed", seed, "seed");
  cmd_gen->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  try {
    if (*cmd_run) {
      const auto alg = parse_alg(alg_str);
      if (!alg) throw DomainError("unknown algorithm: " + alg_str);
      RunSpec spec;
      spec.alg = *alg;
      spec.d = d;
      spec.n = ns.at(0);
      spec.k = k;
      spec.alpha = alpha;
      spec.seed = seed;
      spec.sample_const = sample_const;
      if (budget > 0) spec.query_budget = budget;
      const TrialOutput t = run_trial_full(spec);
      std::string text{kCsvHeader};
      text += '\n';
      text += t.row.to_csv();
      text += '\n';
      write_out(out_path, text);
      if (!ledger_path.empty()) write_out(ledger_path, t.ledger_csv);
      return 0;
    }

    if (*cmd_sweep) {
      const auto alg = parse_alg(alg_str);
      if (!alg) throw DomainError("unknown algorithm: " + alg_str);
      SweepSpec spec;
      spec.base.alg = *alg;
      spec.base.d = d;
      spec.base.k = k;
      spec.base.alpha = alpha;
      spec.base.sample_const = sample_const;
      if (budget > 0) spec.base.query_budget = budget;
      spec.ns.assign(ns.begin(), ns.end());
      spec.trials = trials;
      spec.seed_base = seed;
      const SweepResult res = run_sweep(spec);
      if (!out_path.empty()) write_out(out_path, res.rows_csv());
      if (!plot_path.empty()) {
        std::string plot;
        char buf[64];
        for (const AggregateRow& a : res.agg) {
          std::snprintf(buf, sizeof buf, "%lld %.3f\n", static_cast<long long>(a.n),
                        a.mean_queries);
          plot += buf;
        }
        write_out(plot_path, plot);
      }
      std::fputs(res.agg_csv().c_str(), stdout);
      return 0;
    }

    if (*cmd_fit) {
      std::ifstream f(fit_csv_path, std::ios::binary);
      if (!f) throw DomainError("cannot open CSV: " + fit_csv_path);
      std::stringstream buf;
      buf << f.rdbuf();
      double predicted = 0.0;
      if (theory == "const_ls")
        predicted = theory_exponent_const_ls(d, k);
      else if (theory == "poly_ls")
        predicted = theory_exponent_poly_ls(d, alpha);
      else if (theory == "one_d")
        predicted = theory_exponent_one_d(k);
      else
        throw DomainError("unknown theory: " + theory);
      const FitResult r = fit_trials_csv(buf.str(), predicted);
      std::printf("slope=%.6f intercept=%.6f r_squared=%.6f predicted=%.6f abs_delta=%.6f\n",
                  r.slope, r.intercept, r.r_squared, r.predicted, r.abs_delta);
      return 0;
    }

    if (*cmd_lb) {
      std::vector<Coord> schedule(ell_list.begin(), ell_list.end());
      LbSetup setup = make_lb_setup(schedule, d);
      const int kk = setup.rounds;
      if (budget > 0) {
        setup.per_round_budget = budget;
      } else {
        // Paper budget: floor(m^{(d^{k+1}-d^k)/(d^k-1)} / (10 d k)).
        const double expo = theory_exponent_const_ls(d, kk);
        setup.per_round_budget = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::pow(static_cast<double>(setup.m), expo) /
                                         (10.0 * d * kk)));
      }

      bool violation = false;
      std::vector<std::unique_ptr<AlgorithmUnderTest>> algs;
      if (lb_alg == "zero" || lb_alg == "all") algs.push_back(make_zero_query_algorithm());
      if (lb_alg == "uniform_dnc" || lb_alg == "all") algs.push_back(make_uniform_boundary_dnc());
      if (lb_alg == "full_scan" || lb_alg == "all") algs.push_back(make_full_scan_algorithm());
      if (algs.empty()) throw DomainError("unknown lb algorithm: " + lb_alg);

      std::string report_text;
      for (auto& aut : algs) {
        const GoodnessReport rep = enumerate_goodness(*aut, setup);
        report_text += "# goodness " + aut->name() + "\n" + rep.to_csv();
        for (const GoodnessRow& row : rep.rows) {
          // The prefix property forces non-increasing fractions in length.
          if (row.length > 0 &&
              row.fraction >
                  rep.rows[static_cast<std::size_t>(row.length) - 1].fraction + 1e-12)
            violation = true;
        }
      }

      report_text += "# cost lemma\n";
      report_text += "d,ell,m,max_total,bound,pass\n";
      for (int dd = 1; dd <= 3; ++dd) {
        for (Coord ell = 2; ell <= 4; ++ell) {
          const Coord m = 3 * ell;
          double worst = 0.0;
          bool pass = true;
          full_grid(dd, m).for_each_point([&](const GridPoint& y) {
            const CostLemmaResult res = verify_cost_lemma(y, ell, m, dd);
            worst = std::max(worst, res.total.to_double());
            pass = pass && res.pass;
          });
          char buf[96];
          std::snprintf(buf, sizeof buf, "%d,%lld,%lld,%.6f,%lld,%d\n", dd,
                        static_cast<long long>(ell), static_cast<long long>(m), worst,
                        static_cast<long long>(dd) * ell, pass ? 1 : 0);
          report_text += buf;
          if (!pass) violation = true;
        }
      }

      write_out(out_path, report_text);
      return violation ? kExitViolation : 0;
    }

    if (*cmd_gen) {
      StaircaseInstance inst;
      if (gen_kind == "const_round")
        inst = gen_const_staircase(ns.at(0), d, k, seed);
      else if (gen_kind == "poly_round")
        inst = gen_poly_staircase(ns.at(0), d, alpha, seed);
      else
        throw DomainError("unknown kind: " + gen_kind);
      write_out(out_path, serialize_instance(inst));
      return 0;
    }
  } catch (const ScaleGuardError& e) {
    std::fprintf(stderr, "scale guard: %s\n", e.what());
    return kExitScaleGuard;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
