#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "harqcc/distributions.hpp"
#include "harqcc/effective_capacity.hpp"
#include "harqcc/mode_graph.hpp"
#include "harqcc/monte_carlo.hpp"
#include "harqcc/outage.hpp"

namespace py = pybind11;
using namespace harqcc;

namespace {

// (snr_db, fading_variance) pairs at the python boundary; linear SNR stays
// an internal representation.
using LinkArg = std::pair<double, double>;

LinkParams link_of(const LinkArg& a) {
  return {snr_from_db(a.first), a.second};
}

OutageScheme scheme_of(const std::string& name) {
  for (OutageScheme s : {OutageScheme::kArq, OutageScheme::kRrSource,
                         OutageScheme::kRrCombined, OutageScheme::kIrSource,
                         OutageScheme::kIrCombined})
    if (name == outage_scheme_name(s)) return s;
  throw std::invalid_argument("unknown outage scheme: " + name);
}

Strategy strategy_of(const std::string& name) {
  if (name == "fallback") return Strategy::kRelayFallback;
  if (name == "combining") return Strategy::kChainCombining;
  throw std::invalid_argument("unknown strategy: " + name);
}

Combining combining_of(const std::string& name) {
  if (name == "rr") return Combining::kRepeat;
  if (name == "ir") return Combining::kMutualInfo;
  throw std::invalid_argument("unknown combining scheme: " + name);
}

ScenarioSpec spec_of(const std::string& strategy, const std::string& combining,
                     int m, int n, const LinkArg& sd, const LinkArg& sr,
                     const LinkArg& rd) {
  ScenarioSpec s;
  s.strategy = strategy_of(strategy);
  s.combining = combining_of(combining);
  s.source_budget = m;
  s.relay_budget = n;
  s.sd = link_of(sd);
  s.sr = link_of(sr);
  s.rd = link_of(rd);
  return s;
}

OutageParams outage_params(double snr_db, double rate, int k1, int k2,
                           double rd_snr_db, double fading, double rd_fading) {
  OutageParams p;
  p.first = {snr_from_db(snr_db), fading};
  p.second = {snr_from_db(rd_snr_db), rd_fading};
  p.first_count = k1;
  p.second_count = k2;
  p.rate = rate;
  return p;
}

CompanionMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  CompanionMatrix a;
  a.size = static_cast<int>(rows.size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != a.size)
      throw std::invalid_argument("matrix must be square");
    a.a.insert(a.a.end(), row.begin(), row.end());
  }
  return a;
}

std::vector<std::vector<double>> rows_of(const CompanionMatrix& a) {
  std::vector<std::vector<double>> rows(a.size);
  for (int r = 0; r < a.size; ++r)
    for (int c = 0; c < a.size; ++c) rows[r].push_back(a.at(r, c));
  return rows;
}

SweepAxis axis_of(const std::string& name) {
  if (name == "snr_db") return SweepAxis::kSnrDb;
  if (name == "rate") return SweepAxis::kRate;
  if (name == "theta") return SweepAxis::kTheta;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Outage probability and effective capacity of relay-assisted "
      "retransmission links over Rayleigh fading";
  m.attr("__version__") = "0.3.0";

  m.def("snr_from_db", &snr_from_db, py::arg("db"));
  m.def("snr_to_db", &snr_to_db, py::arg("snr"));

  m.def("erlang_cdf", &erlang_cdf, py::arg("k"), py::arg("rate"), py::arg("t"),
        "CDF of a k-stage exponential sum at t.");
  m.def(
      "two_erlang_sum_cdf",
      [](std::pair<int, double> a, std::pair<int, double> b, double t) {
        return two_erlang_sum_cdf({a.first, a.second}, {b.first, b.second}, t);
      },
      py::arg("a"), py::arg("b"), py::arg("t"),
      "CDF of the sum of two independent stage sums, each given as "
      "(count, rate).");
  m.def(
      "shifted_exp_product_cdf",
      [](const std::vector<std::tuple<int, double, double>>& groups, double z) {
        std::vector<ShiftedExpGroup> gs;
        for (const auto& [count, rate, alpha] : groups)
          gs.push_back({count, rate, alpha});
        return shifted_exp_product_cdf(gs, z);
      },
      py::arg("groups"), py::arg("z"),
      "CDF of a product of shifted exponentials; each group is "
      "(count, rate, shift).");

  m.def(
      "outage",
      [](const std::string& scheme, double snr_db, double rate, int k1, int k2,
         double rd_snr_db, double fading, double rd_fading) {
        return closed_form_outage(
            scheme_of(scheme),
            outage_params(snr_db, rate, k1, k2, rd_snr_db, fading, rd_fading));
      },
      py::arg("scheme"), py::arg("snr_db"), py::arg("rate"), py::arg("k1") = 1,
      py::arg("k2") = 1, py::arg("rd_snr_db") = 10.0, py::arg("fading") = 1.0,
      py::arg("rd_fading") = 1.0,
      "Closed-form outage probability. Schemes: arq, rr_src, rr_comb, "
      "ir_src, ir_comb; the rd_* arguments only matter for combined "
      "schemes.");
  m.def(
      "outage_mc",
      [](const std::string& scheme, double snr_db, double rate, int k1, int k2,
         double rd_snr_db, double fading, double rd_fading,
         std::uint64_t samples, std::uint64_t seed, int threads) {
        SimPlan plan;
        plan.samples = samples;
        plan.seed = seed;
        plan.threads = threads;
        const auto est = estimate_outage(
            scheme_of(scheme),
            outage_params(snr_db, rate, k1, k2, rd_snr_db, fading, rd_fading),
            plan);
        py::dict d;
        d["value"] = est.value;
        d["std_error"] = est.std_error;
        d["failures"] = est.failures;
        d["samples"] = est.samples;
        return d;
      },
      py::arg("scheme"), py::arg("snr_db"), py::arg("rate"), py::arg("k1") = 1,
      py::arg("k2") = 1, py::arg("rd_snr_db") = 10.0, py::arg("fading") = 1.0,
      py::arg("rd_fading") = 1.0, py::arg("samples") = 100000,
      py::arg("seed") = 1, py::arg("threads") = 0,
      "Monte Carlo outage estimate with binomial standard error.");

  m.def(
      "companion_matrix",
      [](const std::string& strategy, const std::string& combining, int m_,
         int n, LinkArg sd, LinkArg sr, LinkArg rd, double theta, double rate) {
        const ModeGraph g = scenario_graph(
            spec_of(strategy, combining, m_, n, sd, sr, rd), rate);
        return rows_of(alpha_matrix(g, theta, rate));
      },
      py::arg("strategy") = "combining", py::arg("combining") = "rr",
      py::arg("m") = 1, py::arg("n") = 1,
      py::arg("sd") = LinkArg{10.0, 1.0}, py::arg("sr") = LinkArg{10.0, 1.0},
      py::arg("rd") = LinkArg{10.0, 1.0}, py::arg("theta") = 1.0,
      py::arg("rate") = 1.0,
      "Mode-transition weight matrix as nested lists; links are "
      "(snr_db, fading_variance) pairs.");
  m.def(
      "spectral_radius",
      [](const std::vector<std::vector<double>>& rows) {
        return spectral_radius(matrix_from_rows(rows));
      },
      py::arg("matrix"),
      "Largest-magnitude eigenvalue of a nonnegative square matrix.");

  m.def(
      "effective_capacity",
      [](const std::string& strategy, const std::string& combining, int m_,
         int n, LinkArg sd, LinkArg sr, LinkArg rd, double theta, double rate) {
        return effective_capacity(spec_of(strategy, combining, m_, n, sd, sr,
                                          rd),
                                  QosSpec{theta, rate});
      },
      py::arg("strategy") = "combining", py::arg("combining") = "rr",
      py::arg("m") = 1, py::arg("n") = 1,
      py::arg("sd") = LinkArg{10.0, 1.0}, py::arg("sr") = LinkArg{10.0, 1.0},
      py::arg("rd") = LinkArg{10.0, 1.0}, py::arg("theta") = 1.0,
      py::arg("rate") = 1.0,
      "Effective capacity (bits/s/Hz) of the scenario under QoS exponent "
      "theta.");
  m.def(
      "ec_sweep",
      [](const std::string& strategy, const std::string& combining, int m_,
         int n, LinkArg sd, LinkArg sr, LinkArg rd, double theta, double rate,
         const std::string& axis, const std::vector<double>& values,
         int threads) {
        const CurveTable c =
            ec_sweep(spec_of(strategy, combining, m_, n, sd, sr, rd),
                     QosSpec{theta, rate}, SweepSpec{axis_of(axis), values},
                     threads);
        py::dict d;
        d["x_name"] = c.x_name;
        d["y_name"] = c.y_name;
        d["x"] = c.xs;
        d["y"] = c.ys;
        d["params"] = c.params;
        d["diagnostics"] = c.diagnostics;
        return d;
      },
      py::arg("strategy") = "combining", py::arg("combining") = "rr",
      py::arg("m") = 1, py::arg("n") = 1,
      py::arg("sd") = LinkArg{10.0, 1.0}, py::arg("sr") = LinkArg{10.0, 1.0},
      py::arg("rd") = LinkArg{10.0, 1.0}, py::arg("theta") = 1.0,
      py::arg("rate") = 1.0, py::arg("axis") = "snr_db",
      py::arg("values") = std::vector<double>{}, py::arg("threads") = 0,
      "Effective-capacity sweep along snr_db, rate, or theta.");
  m.def(
      "simulate_service",
      [](const std::string& strategy, const std::string& combining, int m_,
         int n, LinkArg sd, LinkArg sr, LinkArg rd, double theta, double rate,
         int blocks, int block_length, std::uint64_t seed, int threads) {
        SimPlan plan;
        plan.blocks = blocks;
        plan.block_length = block_length;
        plan.seed = seed;
        plan.threads = threads;
        const ModeGraph g = scenario_graph(
            spec_of(strategy, combining, m_, n, sd, sr, rd), rate);
        const auto est =
            simulate_service_process(g, QosSpec{theta, rate}, plan);
        py::dict d;
        d["value"] = est.value;
        d["ci_halfwidth"] = est.ci_halfwidth;
        d["degenerate"] = est.degenerate;
        return d;
      },
      py::arg("strategy") = "combining", py::arg("combining") = "rr",
      py::arg("m") = 1, py::arg("n") = 1,
      py::arg("sd") = LinkArg{10.0, 1.0}, py::arg("sr") = LinkArg{10.0, 1.0},
      py::arg("rd") = LinkArg{10.0, 1.0}, py::arg("theta") = 1.0,
      py::arg("rate") = 1.0, py::arg("blocks") = 2000,
      py::arg("block_length") = 1000, py::arg("seed") = 1,
      py::arg("threads") = 0,
      "Monte Carlo effective-capacity estimate from the simulated "
      "service process, with a bootstrap confidence half-width.");
}
