#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "latflow/io.hpp"

using namespace latflow;

namespace {

std::string temp_path(const std::string& stem) {
  return std::string("io_cli_test_") + stem;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("CSV round trip preserves doubles exactly") {
  const std::string path = temp_path("roundtrip.csv");
  const std::vector<double> a = {0.1, 1.0 / 3.0, -2.718281828459045e-7, 12345.0};
  const std::vector<double> b = {1e-300, 0.0, 7.0, -0.3333333333333333};
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < a.size(); ++i) rows.push_back({a[i], b[i]});
  write_csv(path, {"a", "b"}, rows);

  std::vector<double> ra, rb;
  read_two_column_csv(path, ra, rb);
  REQUIRE(ra.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(ra[i] == a[i]);
    CHECK(rb[i] == b[i]);
  }
  std::remove(path.c_str());
}

TEST_CASE("format_double survives a parse round trip") {
  for (double v : {3.141592653589793, 1.0e-17, -0.49999999999999994}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("config files: comments, whitespace, overrides, and errors") {
  const std::string path = temp_path("config.cfg");
  write_file(path,
             "# run parameters\n"
             "n = 128\n"
             "  dt=1e-3   \n"
             "\n"
             "functional = sphere  # inline values keep the comment? no\n"
             "n = 256\n");
  const auto cfg = parse_config_file(path);
  CHECK(cfg.at("n") == "256");
  CHECK(cfg.at("dt") == "1e-3");

  write_file(path, "n 128\n");
  CHECK_THROWS_AS(parse_config_file(path), std::runtime_error);
  CHECK_THROWS_AS(parse_config_file("no_such_file.cfg"), std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("two-column reader tolerates a header and rejects junk") {
  const std::string path = temp_path("cols.csv");
  write_file(path, "s,tau\n0.5,-1.0\n1.0,0.0\n");
  std::vector<double> c1, c2;
  read_two_column_csv(path, c1, c2);
  REQUIRE(c1.size() == 2);
  CHECK(c1[0] == 0.5);
  CHECK(c2[1] == 0.0);

  write_file(path, "0.5,-1.0\nbogus line\n");
  CHECK_THROWS_AS(read_two_column_csv(path, c1, c2), std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("CLI: spectrum run succeeds and is deterministic") {
  const std::string out1 = temp_path("run1");
  const std::string out2 = temp_path("run2");
  REQUIRE(run_cli("spectrum --n 64 --out " + out1) == 0);
  REQUIRE(run_cli("spectrum --n 64 --out " + out2) == 0);

  const std::string csv1 = slurp(out1 + "/spectrum.csv");
  const std::string csv2 = slurp(out2 + "/spectrum.csv");
  CHECK(!csv1.empty());
  CHECK(csv1 == csv2);

  const std::string record = slurp(out1 + "/spectrum.json");
  CHECK(record.find("jacobi_spectrum_lambda1") != std::string::npos);
  CHECK(record.find("\"status\": \"pass\"") != std::string::npos);

  if (std::system(("rm -rf " + out1 + " " + out2).c_str()) != 0) {}
}

TEST_CASE("CLI: config file feeds runs and flags override it") {
  const std::string cfg = temp_path("cli.cfg");
  const std::string out = temp_path("cfg_run");
  write_file(cfg, "n = 48\nfunctional = heat\n");
  REQUIRE(run_cli("spectrum --config " + cfg + " --out " + out) == 0);
  const std::string record = slurp(out + "/spectrum.json");
  CHECK(record.find("\"n\": 48") != std::string::npos);
  CHECK(record.find("heat") != std::string::npos);

  REQUIRE(run_cli("spectrum --config " + cfg + " --n 64 --out " + out) == 0);
  CHECK(slurp(out + "/spectrum.json").find("\"n\": 64") != std::string::npos);

  SUBCASE("unknown keys and malformed values exit with the config code") {
    write_file(cfg, "frobnicate = 1\n");
    CHECK(run_cli("spectrum --config " + cfg + " --out " + out) == 2);
    write_file(cfg, "n = banana\n");
    CHECK(run_cli("spectrum --config " + cfg + " --out " + out) == 2);
  }

  std::remove(cfg.c_str());
  if (std::system(("rm -rf " + out).c_str()) != 0) {}
}

TEST_CASE("CLI: bad subcommand arguments are rejected") {
  CHECK(run_cli("spectrum --n 3") != 0);
  CHECK(run_cli("no-such-subcommand") != 0);
  CHECK(run_cli("slow-example --family nonsense") != 0);
}
