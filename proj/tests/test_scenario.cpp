#include <cmath>

#include "doctest.h"
#include "harqcc/scenario.hpp"

using harqcc::ConfigError;
using harqcc::DataTable;
using harqcc::parse_config_text;
using harqcc::parse_matrix_csv;
using harqcc::parse_table_csv;
using harqcc::render_matrix_csv;
using harqcc::render_table_csv;

namespace {

const char* kFullConfig = R"(# sample scenario
[strategy]
type = combining
combining = ir
m = 2
n = 3

[links]
sd_snr_db = 10
sr_snr_db = 12.5
rd_snr_db = 8
fading_variance = 1.5

[qos]
theta = 0.75
rate = 2

[sweep]
axis = snr_db
grid = 0:40:5

[sim]
seed = 42
samples = 500000
blocks = 2000
block_length = 250
threads = 2

[outage]
scheme = ir_comb
k1 = 2
k2 = 1

[output]
path = run.csv
)";

}  // namespace

TEST_CASE("full config parses into every field") {
  const auto cfg = parse_config_text(kFullConfig);
  CHECK(cfg.scenario.strategy == harqcc::Strategy::kChainCombining);
  CHECK(cfg.scenario.combining == harqcc::Combining::kMutualInfo);
  CHECK(cfg.scenario.source_budget == 2);
  CHECK(cfg.scenario.relay_budget == 3);
  CHECK(cfg.scenario.sd.snr == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(cfg.scenario.sr.snr ==
        doctest::Approx(std::pow(10.0, 1.25)).epsilon(1e-12));
  CHECK(cfg.scenario.rd.fading_variance == 1.5);
  CHECK(cfg.qos.theta == 0.75);
  CHECK(cfg.qos.rate == 2.0);
  REQUIRE(cfg.sweep.has_value());
  CHECK(cfg.sweep->axis == harqcc::SweepAxis::kSnrDb);
  REQUIRE(cfg.sweep->values.size() == 9);
  CHECK(cfg.sweep->values.front() == 0.0);
  CHECK(cfg.sweep->values.back() == doctest::Approx(40.0));
  CHECK(cfg.plan.seed == 42);
  CHECK(cfg.plan.samples == 500'000);
  CHECK(cfg.plan.blocks == 2000);
  CHECK(cfg.plan.block_length == 250);
  CHECK(cfg.plan.threads == 2);
  CHECK(cfg.outage_scheme == harqcc::OutageScheme::kIrCombined);
  CHECK(cfg.outage_k1 == 2);
  CHECK(cfg.outage_k2 == 1);
  CHECK(cfg.out_path == "run.csv");
}

TEST_CASE("minimal symmetric config uses defaults") {
  const auto cfg = parse_config_text(
      "[strategy]\ntype = fallback\n[links]\nsnr_db = 5\n"
      "[qos]\ntheta = 1\nrate = 1\n");
  CHECK(cfg.scenario.strategy == harqcc::Strategy::kRelayFallback);
  CHECK(cfg.scenario.sd.snr == cfg.scenario.rd.snr);
  CHECK(cfg.scenario.sd.fading_variance == 1.0);
  CHECK_FALSE(cfg.sweep.has_value());
  CHECK(cfg.plan.samples == 1'000'000);
  CHECK(cfg.out_path.empty());
}

TEST_CASE("comma grids and fractional steps expand correctly") {
  auto cfg = parse_config_text(
      "[strategy]\ntype = combining\n[links]\nsnr_db = 5\n"
      "[qos]\ntheta = 1\nrate = 1\n[sweep]\naxis = theta\n"
      "grid = 0.25,0.5,1,2,4,8\n");
  REQUIRE(cfg.sweep->values.size() == 6);
  CHECK(cfg.sweep->values[3] == 2.0);

  cfg = parse_config_text(
      "[strategy]\ntype = combining\n[links]\nsnr_db = 5\n"
      "[qos]\ntheta = 1\nrate = 1\n[sweep]\naxis = rate\n"
      "grid = 0.1:1:0.1\n");
  REQUIRE(cfg.sweep->values.size() == 10);
  CHECK(cfg.sweep->values.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("config errors carry line numbers") {
  auto expect_line = [](const std::string& text, int line) {
    try {
      parse_config_text(text);
      FAIL_CHECK("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(e.line() == line);
    }
  };
  expect_line("[strategy]\nbogus_key = 1\n", 2);
  expect_line("[nope]\n", 1);
  expect_line("[strategy]\ntype combining\n", 2);
  expect_line("[strategy]\ntype = combining\nm = 0\n", 3);
  expect_line("[strategy]\ntype = combining\nm = 2\nm = 3\n", 4);
  expect_line(
      "[strategy]\ntype = combining\n[links]\nsnr_db = 5\n[qos]\n"
      "theta = -1\nrate = 1\n",
      6);
  // theta = 0 is allowed (matrix diagnostic); negative is not
  CHECK(parse_config_text("[strategy]\ntype = combining\n[links]\n"
                          "snr_db = 5\n[qos]\ntheta = 0\nrate = 1\n")
            .qos.theta == 0.0);
  expect_line(
      "[strategy]\ntype = combining\n[links]\nsnr_db = 5\n[qos]\n"
      "theta = 1\nrate = 1\n[sweep]\naxis = rate\ngrid = 2:1:1\n",
      10);
  expect_line(
      "[strategy]\ntype = combining\n[links]\nsnr_db = 5\n[qos]\n"
      "theta = 1\nrate = 1\n[sweep]\naxis = up\ngrid = 1:2:1\n",
      9);
  expect_line(
      "[strategy]\ntype = combining\n[links]\nsnr_db = 5\n[qos]\n"
      "theta = 1\nrate = 1\n[sim]\nsamples = 10\n",
      9);
}

TEST_CASE("config rejects structural mistakes") {
  CHECK_THROWS_AS(parse_config_text(""), ConfigError);
  // fallback strategy with combining-only keys
  CHECK_THROWS_AS(
      parse_config_text("[strategy]\ntype = fallback\nm = 2\n"
                        "[links]\nsnr_db = 5\n[qos]\ntheta = 1\nrate = 1\n"),
      ConfigError);
  // symmetric and per-link values for the same field
  CHECK_THROWS_AS(
      parse_config_text("[strategy]\ntype = fallback\n[links]\nsnr_db = 5\n"
                        "sd_snr_db = 3\nsr_snr_db = 3\nrd_snr_db = 3\n"
                        "[qos]\ntheta = 1\nrate = 1\n"),
      ConfigError);
  // incomplete per-link set
  CHECK_THROWS_AS(
      parse_config_text("[strategy]\ntype = fallback\n[links]\nsd_snr_db = 3\n"
                        "[qos]\ntheta = 1\nrate = 1\n"),
      ConfigError);
  // missing qos
  CHECK_THROWS_AS(
      parse_config_text("[strategy]\ntype = fallback\n[links]\nsnr_db = 5\n"),
      ConfigError);
  // unknown outage scheme
  CHECK_THROWS_AS(
      parse_config_text("[strategy]\ntype = fallback\n[links]\nsnr_db = 5\n"
                        "[qos]\ntheta = 1\nrate = 1\n[outage]\nscheme = xx\n"),
      ConfigError);
}

TEST_CASE("table csv round-trips exactly") {
  DataTable t;
  t.params = {{"strategy", "combining"}, {"theta", "0.75"}};
  t.columns = {"snr_db", "effective_capacity"};
  t.rows = {{0.0, 1.0 / 3.0},
            {2.5, std::sqrt(2.0)},
            {5.0, 0.12345678901234567},
            {7.5, 1e-17},
            {10.0, 12345.678}};
  t.notes = {"skipped snr_db=12.5: demo"};
  const std::string text = render_table_csv(t);
  CHECK(text.find("# params: strategy=combining theta=0.75\n") !=
        std::string::npos);
  CHECK(text.find("\r") == std::string::npos);
  const DataTable back = parse_table_csv(text);
  CHECK(back.params == t.params);
  CHECK(back.columns == t.columns);
  CHECK(back.notes == t.notes);
  REQUIRE(back.rows.size() == t.rows.size());
  for (size_t i = 0; i < t.rows.size(); ++i)
    for (size_t j = 0; j < t.rows[i].size(); ++j)
      CHECK(back.rows[i][j] ==
            doctest::Approx(t.rows[i][j]).epsilon(1e-14));
  // serialization is a fixed point
  CHECK(render_table_csv(back) == text);
}

TEST_CASE("curve adapters preserve content") {
  harqcc::CurveTable c;
  c.x_name = "theta";
  c.y_name = "effective_capacity";
  c.xs = {0.5, 1.0};
  c.ys = {0.9, 0.7};
  c.params = {{"rate", "1"}};
  c.diagnostics = {"skipped theta=2: demo"};
  const auto round = harqcc::to_curve(harqcc::to_table(c));
  CHECK(round.x_name == c.x_name);
  CHECK(round.y_name == c.y_name);
  CHECK(round.xs == c.xs);
  CHECK(round.ys == c.ys);
  CHECK(round.params == c.params);
  CHECK(round.diagnostics == c.diagnostics);
}

TEST_CASE("table csv parse rejects malformed input") {
  CHECK_THROWS_AS(parse_table_csv("1,2\n"), ConfigError);  // no columns line
  CHECK_THROWS_AS(parse_table_csv("# columns: a,b\n1\n"), ConfigError);
  CHECK_THROWS_AS(parse_table_csv("# columns: a,b\n1,x\n"), ConfigError);
  CHECK_THROWS_AS(parse_table_csv("# params: oops\n# columns: a\n1\n"),
                  ConfigError);
  const auto t = parse_table_csv("# columns: a,b\n\n1,2\n");
  CHECK(t.rows.size() == 1);
}

TEST_CASE("matrix csv round-trips with the size header") {
  harqcc::CompanionMatrix m;
  m.size = 3;
  m.a = {0.25, 0, 0.125, 1.0 / 3.0, 0, 0, 0.5, 0.7071067811865476, 0};
  const std::string text = render_matrix_csv(m, true);
  CHECK(text.rfind("# L=3\n", 0) == 0);
  CHECK(text.find("# column_sums: ") != std::string::npos);
  const auto back = parse_matrix_csv(text);
  REQUIRE(back.size == 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(back.at(r, c) == doctest::Approx(m.at(r, c)).epsilon(1e-14));
  CHECK(render_matrix_csv(back, true) == text);

  CHECK_THROWS_AS(parse_matrix_csv("2,1\n"), ConfigError);
  CHECK_THROWS_AS(parse_matrix_csv("L=2\n1,2\n"), ConfigError);
  CHECK_THROWS_AS(parse_matrix_csv("L=2\n1,2\n3\n"), ConfigError);
  CHECK_THROWS_AS(parse_matrix_csv("L=2\n1,2\n3,4\n5,6\n"), ConfigError);
}
