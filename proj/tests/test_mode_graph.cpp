#include <cmath>
#include <vector>

#include "doctest.h"
#include "harqcc/mode_graph.hpp"

using harqcc::alpha_matrix;
using harqcc::CompanionMatrix;
using harqcc::OutageTablesI;
using harqcc::OutageTablesII;

namespace {

// Distinct sentinel probabilities make every entry of the expected matrix
// traceable to one specific table cell.
const double kQsd[2] = {0.11, 0.13};
const double kQsr[2] = {0.17, 0.19};
const double kQsrd[2][2] = {{0.23, 0.29}, {0.31, 0.37}};

OutageTablesII sentinel_tables(int m, int n) {
  OutageTablesII t;
  t.source_budget = m;
  t.relay_budget = n;
  for (int l = 1; l <= m; ++l) {
    t.q_sd.push_back(kQsd[l - 1]);
    t.q_sr.push_back(kQsr[l - 1]);
    for (int i = 1; i <= n; ++i) t.q_srd.push_back(kQsrd[l - 1][i - 1]);
  }
  return t;
}

void check_matrix(const CompanionMatrix& got,
                  const std::vector<std::vector<double>>& want) {
  REQUIRE(got.size == static_cast<int>(want.size()));
  for (int r = 0; r < got.size; ++r) {
    for (int c = 0; c < got.size; ++c) {
      INFO("row ", r, " col ", c);
      if (want[r][c] == 0.0)
        CHECK(got.at(r, c) == 0.0);
      else
        CHECK(got.at(r, c) == doctest::Approx(want[r][c]).epsilon(1e-14));
    }
  }
}

void check_column_sums(const CompanionMatrix& a, double tol) {
  for (int c = 0; c < a.size; ++c) {
    double s = 0.0;
    for (int r = 0; r < a.size; ++r) s += a.at(r, c);
    CHECK(std::abs(s - 1.0) <= tol);
  }
}

}  // namespace

TEST_CASE("relay-fallback chain matrix") {
  const double qsd = 0.41, qsr = 0.43, qrd = 0.47;
  const double th = 0.7, rate = 1.3;
  const double e = std::exp(-th * rate);
  const auto a = alpha_matrix(harqcc::build_strategy1({qsd, qsr, qrd}), th, rate);
  check_matrix(a, {{qsd * qsr + (1.0 - qsd) * e, (1.0 - qrd) * e},
                   {qsd * (1.0 - qsr), qrd}});
  check_column_sums(alpha_matrix(harqcc::build_strategy1({qsd, qsr, qrd}), 0.0,
                                 rate),
                    1e-12);
}

TEST_CASE("combining chain matrix: one source round, one relay round") {
  const auto g = harqcc::build_strategy2(sentinel_tables(1, 1));
  CHECK(g.mode_count == 2);
  const double th = 0.7, rate = 1.3;
  const double e = std::exp(-th * rate);
  const double qsd = kQsd[0], qsr = kQsr[0], q11 = kQsrd[0][0];
  check_matrix(alpha_matrix(g, th, rate),
               {{qsd * qsr + (1.0 - qsd) * e, q11 + (1.0 - q11) * e},
                {qsd * (1.0 - qsr), 0.0}});
}

TEST_CASE("combining chain matrix: one source round, two relay rounds") {
  const auto g = harqcc::build_strategy2(sentinel_tables(1, 2));
  CHECK(g.mode_count == 3);
  const double th = 0.9, rate = 2.0;
  const double e = std::exp(-th * rate);
  const double qsd = kQsd[0], qsr = kQsr[0];
  const double q11 = kQsrd[0][0], q12 = kQsrd[0][1];
  check_matrix(alpha_matrix(g, th, rate),
               {{qsd * qsr + (1.0 - qsd) * e, (1.0 - q11) * e,
                 q12 + (1.0 - q12) * e},
                {qsd * (1.0 - qsr), 0.0, 0.0},
                {0.0, q11, 0.0}});
}

TEST_CASE("combining chain matrix: two source rounds, one relay round") {
  const auto g = harqcc::build_strategy2(sentinel_tables(2, 1));
  CHECK(g.mode_count == 4);
  const double th = 0.5, rate = 4.0;
  const double e = std::exp(-th * rate);
  const double q11 = kQsrd[0][0], q21 = kQsrd[1][0];
  check_matrix(
      alpha_matrix(g, th, rate),
      {{(1.0 - kQsd[0]) * e, q11 + (1.0 - q11) * e,
        kQsd[1] * kQsr[1] + (1.0 - kQsd[1]) * e, q21 + (1.0 - q21) * e},
       {kQsd[0] * (1.0 - kQsr[0]), 0.0, 0.0, 0.0},
       {kQsd[0] * kQsr[0], 0.0, 0.0, 0.0},
       {0.0, 0.0, kQsd[1] * (1.0 - kQsr[1]), 0.0}});
}

TEST_CASE("combining chain matrix: two source rounds, two relay rounds") {
  const auto g = harqcc::build_strategy2(sentinel_tables(2, 2));
  CHECK(g.mode_count == 6);
  const double th = 1.0, rate = 1.0;
  const double e = std::exp(-th * rate);
  const double q11 = kQsrd[0][0], q12 = kQsrd[0][1];
  const double q21 = kQsrd[1][0], q22 = kQsrd[1][1];
  check_matrix(
      alpha_matrix(g, th, rate),
      {{(1.0 - kQsd[0]) * e, (1.0 - q11) * e, q12 + (1.0 - q12) * e,
        kQsd[1] * kQsr[1] + (1.0 - kQsd[1]) * e, (1.0 - q21) * e,
        q22 + (1.0 - q22) * e},
       {kQsd[0] * (1.0 - kQsr[0]), 0.0, 0.0, 0.0, 0.0, 0.0},
       {0.0, q11, 0.0, 0.0, 0.0, 0.0},
       {kQsd[0] * kQsr[0], 0.0, 0.0, 0.0, 0.0, 0.0},
       {0.0, 0.0, 0.0, kQsd[1] * (1.0 - kQsr[1]), 0.0, 0.0},
       {0.0, 0.0, 0.0, 0.0, q21, 0.0}});
}

TEST_CASE("chain matrices are column-stochastic at theta zero") {
  for (auto [m, n] : {std::pair{1, 1}, {1, 3}, {3, 1}, {2, 2}, {4, 4}, {8, 8}}) {
    OutageTablesII t;
    t.source_budget = m;
    t.relay_budget = n;
    // arbitrary in-range values, all distinct
    for (int l = 1; l <= m; ++l) {
      t.q_sd.push_back(0.05 + 0.9 * l / (m + 1.0));
      t.q_sr.push_back(0.10 + 0.8 * l / (m + 1.0));
      for (int i = 1; i <= n; ++i)
        t.q_srd.push_back(0.03 + 0.9 * (l * n + i) / (m * n + n + 1.0));
    }
    const auto g = harqcc::build_strategy2(t);
    CHECK(g.mode_count == m * (n + 1));
    CHECK(static_cast<int>(g.transitions.size()) == m * (3 + 2 * n));
    check_column_sums(alpha_matrix(g, 0.0, 2.0), 1e-12);
    // theta > 0 can only shrink the column sums
    const auto a = alpha_matrix(g, 1.5, 2.0);
    for (int c = 0; c < a.size; ++c) {
      double s = 0.0;
      for (int r = 0; r < a.size; ++r) s += a.at(r, c);
      CHECK(s <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("real tables: symmetric combining collapses the combined column") {
  const harqcc::LinkParams link{harqcc::snr_from_db(8.0), 1.0};
  const auto rt = harqcc::make_rate(1.5);
  const auto t = make_tables_strategy2(link, link, link, 2, 2,
                                       harqcc::Combining::kRepeat, rt);
  // with identical links, q_srd(l, i) depends only on l + i
  CHECK(t.q_srd[0 * 2 + 1] == doctest::Approx(t.q_srd[1 * 2 + 0]).epsilon(1e-10));
  // and equals the (l + i)-stage source-only value
  CHECK(t.q_srd[0] ==
        doctest::Approx(harqcc::rr_source_outage(link, 2, rt)).epsilon(1e-10));
  // tables must be decreasing in the number of combined copies
  CHECK(t.q_sd[1] < t.q_sd[0]);
  CHECK(t.q_srd[1] < t.q_srd[0]);
}

TEST_CASE("builder validation") {
  CHECK_THROWS_AS(harqcc::build_strategy1({1.2, 0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(harqcc::build_strategy1({-0.1, 0.5, 0.5}),
                  std::invalid_argument);
  OutageTablesII t = sentinel_tables(2, 2);
  t.q_srd.pop_back();
  CHECK_THROWS_AS(harqcc::build_strategy2(t), std::invalid_argument);
  OutageTablesII bad = sentinel_tables(1, 1);
  bad.q_sd[0] = 1.5;
  CHECK_THROWS_AS(harqcc::build_strategy2(bad), std::invalid_argument);
  const auto g = harqcc::build_strategy2(sentinel_tables(1, 1));
  CHECK_THROWS_AS(alpha_matrix(g, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_matrix(g, 1.0, 0.0), std::invalid_argument);
}
