#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef POHO_CLI_PATH
#define POHO_CLI_PATH "./poho"
#endif

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(POHO_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const char* path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("no-such-command") == 2);
  CHECK(run("pohozaev --norm hq:abc --n 1 --p 2 --alpha 1 --beta 0 --f pmm:4,1") == 2);
  CHECK(run("pohozaev --norm hq:2 --n 1 --p 2 --alpha 1 --beta 0") == 2);  // missing --f
  CHECK(run("nonexistence --n 2 --p 3 --s 0.5 --alpha 1 --beta 0 --q 4") == 2);  // p >= n
  CHECK(run("nonexistence --n 3 --p 2 --s 0.5 --alpha 1 --beta 1 --q 7") == 0);
  // an absurd iteration cap cannot converge -> exit 3, report still written
  CHECK(run("solve --norm euclidean --n 1 --p 2 --alpha 1 --beta 0 --f pmm:4,1 "
            "--preset gaussian:1 --L 20 --N 64 --max-iters 2 --tol 1e-12") == 3);
}

TEST_CASE("pohozaev command emits the fixed report columns") {
  const char* out = "cli_report.csv";
  const int code = run(
      "pohozaev --norm hq:2 --n 1 --p 2 --alpha 1 --beta 0 --f pmm:4,1 "
      "--preset sech --L 20 --N 1024 --out cli_report.csv");
  CHECK(code == 0);
  const std::string text = slurp(out);
  CHECK(text.find("command,n,p,s,alpha,beta,q,local_term,nonlocal_term,"
                  "potential_term,pohozaev_residual,nehari_residual,tail_bound,"
                  "decay_margin,verdict") == 0);
  CHECK(text.find("pohozaev,1,2,") != std::string::npos);
  std::remove(out);
}

TEST_CASE("norm-check warns about the l1 convexity probe but exits 0") {
  const char* out = "cli_norm.csv";
  CHECK(run("norm-check --norm hq:1 --n 2 --samples 4000 --out cli_norm.csv") == 0);
  const std::string text = slurp(out);
  CHECK(text.find("strict_convexity_probe,fail") != std::string::npos);
  CHECK(text.find("euler_relation,pass") != std::string::npos);
  std::remove(out);
}

TEST_CASE("identical run spec and seed give byte-identical output across thread caps") {
  const std::string spec =
      "energy --norm hq:2 --n 1 --p 2 --s 0.5 --alpha 1 --beta 1 --f sp:4,1,0 "
      "--preset gaussian:1 --L 12 --N 512";
  const std::string base = std::string(POHO_CLI_PATH) + " " + spec;
  CHECK(std::system(("POHOZAEV_THREADS=1 " + base + " --out cli_t1.csv > /dev/null").c_str()) == 0);
  CHECK(std::system(("POHOZAEV_THREADS=4 " + base + " --out cli_t4.csv > /dev/null").c_str()) == 0);
  CHECK(slurp("cli_t1.csv") == slurp("cli_t4.csv"));
  CHECK(!slurp("cli_t1.csv").empty());
  std::remove("cli_t1.csv");
  std::remove("cli_t4.csv");
}
