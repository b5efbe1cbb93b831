#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <string>

#ifndef GRIDLAB_CLI_PATH
#define GRIDLAB_CLI_PATH "gridlab"
#endif

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cmd(const std::string& args) {
  const std::string cmd = std::string(GRIDLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  CmdResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("run emits one CSV row and is byte-deterministic") {
  const std::string args = "run --alg const_ls --d 2 --n 64 --k 2 --seed 1";
  const CmdResult a = run_cmd(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out.rfind("algorithm,d,n,k_or_alpha,seed,rounds_used,queries_used,success,solution\n",
                    0) == 0);
  CHECK(a.out.find("const_ls,2,80,2,1,2,") != std::string::npos);  // rounds_used == 2
  CHECK(a.out.find(",1,") != std::string::npos);                   // success

  const CmdResult b = run_cmd(args);
  CHECK(a.out == b.out);
}

TEST_CASE("one_d_ls run lands near 3 sqrt(n) queries") {
  const CmdResult r = run_cmd("run --alg one_d_ls --n 100 --k 2 --seed 3");
  CHECK(r.exit_code == 0);
  // queries_used is the 7th field of the data row.
  const std::size_t nl = r.out.find('\n');
  std::string row = r.out.substr(nl + 1);
  std::size_t pos = 0;
  for (int f = 0; f < 6; ++f) pos = row.find(',', pos) + 1;
  const long long q = std::stoll(row.substr(pos));
  CHECK(q >= 25);
  CHECK(q <= 35);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cmd("run --alg not_an_algorithm --n 8").exit_code == 2);
  CHECK(run_cmd("sweep --alg const_ls --n 64 --n 32").exit_code == 2);
  CHECK(run_cmd("bogus-subcommand").exit_code == 2);
}

TEST_CASE("sweep plus fit round-trip through a file") {
  const std::string csv = "/tmp/gridlab_test_sweep.csv";
  const CmdResult sweep = run_cmd(
      "sweep --alg one_d_ls --k 2 --n 100 --n 10000 --n 1000000 --trials 3 --seed 5 --out " + csv);
  CHECK(sweep.exit_code == 0);
  CHECK(sweep.out.rfind("n,trials,", 0) == 0);

  const CmdResult fit = run_cmd("fit --csv " + csv + " --theory one_d --k 2");
  CHECK(fit.exit_code == 0);
  CHECK(fit.out.find("slope=") != std::string::npos);
  CHECK(fit.out.find("predicted=0.5") != std::string::npos);
  std::remove(csv.c_str());
}

TEST_CASE("verify-lb passes on the default toy parameters") {
  const CmdResult r = run_cmd("verify-lb --d 2 --ell 4 --ell 2 --out -");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("# goodness zero_query") != std::string::npos);
  CHECK(r.out.find("# cost lemma") != std::string::npos);
}

TEST_CASE("gen writes a loadable instance file") {
  const CmdResult r = run_cmd("gen --kind const_round --d 2 --n 16 --k 2 --seed 9");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("const_round 2 16 2 9 ", 0) == 0);
  // Header plus k+1 = 3 connecting points.
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
}
