// Drives the installed binary end to end through std::system.
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "harqcc/outage.hpp"
#include "harqcc/scenario.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& tag) {
  static int counter = 0;
  return "/tmp/harqcc_cli_" + std::to_string(::getpid()) + "_" +
         std::to_string(counter++) + "_" + tag;
}

std::string write_config(const std::string& text) {
  const std::string path = temp_path("cfg.ini");
  std::ofstream f(path, std::ios::binary);
  f << text;
  return path;
}

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::string& args) {
  const std::string base = temp_path("io");
  const std::string cmd = std::string(HARQCC_CLI_PATH) + " " + args + " >" +
                          base + ".out 2>" + base + ".err";
  const int rc = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(base + ".out");
  r.err = slurp(base + ".err");
  std::remove((base + ".out").c_str());
  std::remove((base + ".err").c_str());
  return r;
}

const char* kEcConfig = R"(
[strategy]
type = combining
combining = rr
m = 2
n = 2

[links]
snr_db = 10

[qos]
theta = 1.0
rate = 1.0

[sweep]
axis = snr_db
grid = 0:30:10
)";

}  // namespace

TEST_CASE("outage command emits a parseable closed-form curve") {
  const std::string cfg = write_config(R"(
[strategy]
type = combining

[links]
snr_db = 10

[qos]
theta = 1.0
rate = 1.0

[sweep]
axis = snr_db
grid = 0:20:5
)");
  const std::string out = temp_path("curve.csv");
  const CliRun r = run_cli("outage --config " + cfg + " --out " + out);
  CHECK(r.code == 0);
  const std::string text = slurp(out);
  const harqcc::DataTable t = harqcc::parse_table_csv(text);
  // emitted CSV reparses and re-renders to the identical byte string
  CHECK(harqcc::render_table_csv(t) == text);
  REQUIRE(t.columns == std::vector<std::string>{"snr_db", "closed_form"});
  REQUIRE(t.rows.size() == 5);
  const auto rt = harqcc::make_rate(1.0);
  for (const auto& row : t.rows) {
    const harqcc::LinkParams link{harqcc::snr_from_db(row[0]), 1.0};
    CHECK(row[1] ==
          doctest::Approx(harqcc::arq_outage(link, rt)).epsilon(1e-14));
  }
  bool has_scheme = false;
  for (const auto& [k, v] : t.params)
    if (k == "scheme" && v == "arq") has_scheme = true;
  CHECK(has_scheme);
  std::remove(out.c_str());
  std::remove(cfg.c_str());
}

TEST_CASE("outage --mc appends estimates that track the closed form") {
  const std::string cfg = write_config(R"(
[strategy]
type = combining

[links]
snr_db = 0

[qos]
theta = 1.0
rate = 1.0

[sweep]
axis = snr_db
grid = 0,10

[sim]
samples = 20000

[outage]
scheme = rr_comb
k1 = 2
k2 = 1
)");
  const std::string out = temp_path("mc.csv");
  const CliRun a = run_cli("outage --mc --seed 7 --config " + cfg + " --out " + out);
  REQUIRE(a.code == 0);
  const harqcc::DataTable ta = harqcc::parse_table_csv(slurp(out));
  REQUIRE(ta.columns == std::vector<std::string>{"snr_db", "closed_form",
                                                 "mc_estimate", "mc_stderr"});
  for (const auto& row : ta.rows) {
    CHECK(row[3] > 0.0);
    CHECK(std::abs(row[2] - row[1]) <= 5.0 * row[3]);
  }

  const CliRun b = run_cli("outage --mc --seed 9 --config " + cfg + " --out " + out);
  REQUIRE(b.code == 0);
  const harqcc::DataTable tb = harqcc::parse_table_csv(slurp(out));
  bool estimates_differ = false;
  for (size_t i = 0; i < ta.rows.size(); ++i) {
    CHECK(tb.rows[i][1] == ta.rows[i][1]);  // closed form is seed-free
    if (tb.rows[i][2] != ta.rows[i][2]) estimates_differ = true;
  }
  CHECK(estimates_differ);
  std::remove(out.c_str());
  std::remove(cfg.c_str());
}

TEST_CASE("ec command reproduces the library sweep") {
  const std::string cfg = write_config(kEcConfig);
  const std::string out = temp_path("ec.csv");
  const CliRun r = run_cli("ec --config " + cfg + " --out " + out);
  REQUIRE(r.code == 0);
  const harqcc::DataTable t = harqcc::parse_table_csv(slurp(out));
  REQUIRE(t.columns ==
          std::vector<std::string>{"snr_db", "effective_capacity"});
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows[1][0] == 10.0);
  CHECK(t.rows[1][1] == doctest::Approx(0.873925970629462).epsilon(1e-12));
  for (size_t i = 1; i < t.rows.size(); ++i)
    CHECK(t.rows[i][1] >= t.rows[i - 1][1]);
  std::remove(out.c_str());
  std::remove(cfg.c_str());
}

TEST_CASE("matrix command dumps the weight matrix, stochastic at theta zero") {
  const std::string cfg = write_config(kEcConfig);
  const CliRun r = run_cli("matrix --config " + cfg);
  REQUIRE(r.code == 0);
  const harqcc::CompanionMatrix a = harqcc::parse_matrix_csv(r.out);
  CHECK(a.size == 6);
  CHECK(r.out.find("# column_sums:") == std::string::npos);

  std::string zero_theta(kEcConfig);
  const auto pos = zero_theta.find("theta = 1.0");
  REQUIRE(pos != std::string::npos);
  zero_theta.replace(pos, 11, "theta = 0.0");
  const std::string cfg0 = write_config(zero_theta);
  const CliRun r0 = run_cli("matrix --config " + cfg0);
  REQUIRE(r0.code == 0);
  CHECK(r0.out.find("# column_sums:") != std::string::npos);
  const harqcc::CompanionMatrix a0 = harqcc::parse_matrix_csv(r0.out);
  for (int c = 0; c < a0.size; ++c) {
    double s = 0.0;
    for (int row = 0; row < a0.size; ++row) s += a0.at(row, c);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  std::remove(cfg.c_str());
  std::remove(cfg0.c_str());
}

TEST_CASE("cli exit codes follow the contract") {
  // usage / configuration problems -> 2
  CHECK(run_cli("outage --config /nonexistent/file.ini").code == 2);
  CHECK(run_cli("bogus-subcommand").code == 2);
  CHECK(run_cli("outage").code == 2);  // --config is required

  const std::string bad_key = write_config("[qos]\ntheta = 1\nrate = 1\nzap = 3\n");
  const CliRun bk = run_cli("ec --config " + bad_key);
  CHECK(bk.code == 2);
  CHECK(bk.err.find("config error") != std::string::npos);

  const std::string bad_grid = write_config(R"(
[strategy]
type = combining
[links]
snr_db = 5
[qos]
theta = 1
rate = 1
[sweep]
axis = snr_db
grid = 5:1:1
)");
  CHECK(run_cli("ec --config " + bad_grid).code == 2);

  std::string theta_axis(kEcConfig);
  const auto pos = theta_axis.find("axis = snr_db");
  theta_axis.replace(pos, 13, "axis = theta");
  const std::string cfg_theta = write_config(theta_axis);
  CHECK(run_cli("outage --config " + cfg_theta).code == 2);

  // numeric breakdown -> 3: accumulation tail far beyond quadrature reach
  const std::string hard = write_config(R"(
[strategy]
type = combining
combining = ir
[links]
snr_db = 5
[qos]
theta = 1
rate = 55
[sweep]
axis = snr_db
grid = 0:10:5
[outage]
scheme = ir_comb
k1 = 3
k2 = 2
)");
  const CliRun nf = run_cli("outage --config " + hard);
  CHECK(nf.code == 3);
  CHECK(nf.err.find("numeric failure") != std::string::npos);

  // help -> 0
  CHECK(run_cli("--help").code == 0);

  std::remove(bad_key.c_str());
  std::remove(bad_grid.c_str());
  std::remove(cfg_theta.c_str());
  std::remove(hard.c_str());
}

TEST_CASE("validate command reports failures when tolerances are zeroed") {
  const std::string out = temp_path("val.json");
  const CliRun r = run_cli("validate --tolerance-scale 0 --out " + out);
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);
  CHECK(r.out.find("result: FAIL") != std::string::npos);
  const std::string json = slurp(out);
  CHECK(json.find("\"all_passed\": false") != std::string::npos);
  std::remove(out.c_str());
}
