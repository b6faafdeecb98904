// Command-line front end: outage / ec / matrix / validate.
//
// Exit codes (stable contract): 0 success, 1 validation failure,
// 2 configuration or usage error, 3 numeric failure.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "harqcc/effective_capacity.hpp"
#include "harqcc/mode_graph.hpp"
#include "harqcc/monte_carlo.hpp"
#include "harqcc/outage.hpp"
#include "harqcc/scenario.hpp"
#include "harqcc/specfun.hpp"
#include "harqcc/validate.hpp"
#include "json.hpp"

namespace {

using harqcc::ConfigError;
using harqcc::DataTable;
using harqcc::OutageParams;
using harqcc::ScenarioConfig;
using harqcc::SimPlan;
using harqcc::SweepAxis;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// Empty path means stdout.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw ConfigError("cannot write output file: " + path);
}

std::string resolved_out(const CommonOpts& o, const ScenarioConfig& cfg) {
  return o.out_path.empty() ? cfg.out_path : o.out_path;
}

bool combined_scheme(harqcc::OutageScheme s) {
  return s == harqcc::OutageScheme::kRrCombined ||
         s == harqcc::OutageScheme::kIrCombined;
}

int cmd_outage(const CommonOpts& o, bool mc) {
  ScenarioConfig cfg = harqcc::parse_config_file(o.config_path);
  if (!cfg.sweep)
    throw ConfigError("the outage command requires a [sweep] section");
  if (cfg.sweep->axis == SweepAxis::kTheta)
    throw ConfigError("sweep axis 'theta' does not apply to outage curves");
  const bool snr_axis = cfg.sweep->axis == SweepAxis::kSnrDb;
  SimPlan plan = cfg.plan;
  if (o.seed) plan.seed = *o.seed;

  DataTable t;
  t.params.emplace_back("scheme",
                        harqcc::outage_scheme_name(cfg.outage_scheme));
  t.params.emplace_back("k1", std::to_string(cfg.outage_k1));
  if (combined_scheme(cfg.outage_scheme))
    t.params.emplace_back("k2", std::to_string(cfg.outage_k2));
  if (snr_axis) {
    t.params.emplace_back("rate", fmt_g(cfg.qos.rate));
  } else {
    t.params.emplace_back("sd_snr_db",
                          fmt_g(harqcc::snr_to_db(cfg.scenario.sd.snr)));
    if (combined_scheme(cfg.outage_scheme))
      t.params.emplace_back("rd_snr_db",
                            fmt_g(harqcc::snr_to_db(cfg.scenario.rd.snr)));
  }
  if (cfg.scenario.sd.fading_variance != 1.0)
    t.params.emplace_back("sd_fading",
                          fmt_g(cfg.scenario.sd.fading_variance));
  if (combined_scheme(cfg.outage_scheme) &&
      cfg.scenario.rd.fading_variance != 1.0)
    t.params.emplace_back("rd_fading",
                          fmt_g(cfg.scenario.rd.fading_variance));
  if (mc) {
    t.params.emplace_back("samples",
                          std::to_string(plan.samples));
    t.params.emplace_back("seed", std::to_string(plan.seed));
  }

  t.columns = {snr_axis ? "snr_db" : "rate", "closed_form"};
  if (mc) {
    t.columns.push_back("mc_estimate");
    t.columns.push_back("mc_stderr");
  }
  for (double x : cfg.sweep->values) {
    OutageParams p;
    p.first = cfg.scenario.sd;
    p.second = cfg.scenario.rd;
    p.first_count = cfg.outage_k1;
    p.second_count = cfg.outage_k2;
    p.rate = cfg.qos.rate;
    if (snr_axis) {
      p.first.snr = harqcc::snr_from_db(x);
      p.second.snr = harqcc::snr_from_db(x);
    } else {
      p.rate = x;
    }
    std::vector<double> row{x,
                            harqcc::closed_form_outage(cfg.outage_scheme, p)};
    if (mc) {
      const auto est = harqcc::estimate_outage(cfg.outage_scheme, p, plan);
      row.push_back(est.value);
      row.push_back(est.std_error);
    }
    t.rows.push_back(std::move(row));
  }
  write_output(resolved_out(o, cfg), harqcc::render_table_csv(t));
  return 0;
}

int cmd_ec(const CommonOpts& o) {
  ScenarioConfig cfg = harqcc::parse_config_file(o.config_path);
  if (!cfg.sweep)
    throw ConfigError("the ec command requires a [sweep] section");
  if (cfg.sweep->axis != SweepAxis::kTheta && !(cfg.qos.theta > 0.0))
    throw ConfigError("[qos] theta must be > 0 for capacity computation");
  const harqcc::CurveTable curve =
      harqcc::ec_sweep(cfg.scenario, cfg.qos, *cfg.sweep, cfg.plan.threads);
  if (curve.xs.empty()) {
    for (const auto& d : curve.diagnostics)
      std::fprintf(stderr, "%s\n", d.c_str());
    throw harqcc::AccuracyError("no sweep point produced a value", 0.0, 0.0);
  }
  for (const auto& d : curve.diagnostics)
    std::fprintf(stderr, "warning: %s\n", d.c_str());
  write_output(resolved_out(o, cfg),
               harqcc::render_table_csv(harqcc::to_table(curve)));
  return 0;
}

int cmd_matrix(const CommonOpts& o) {
  ScenarioConfig cfg = harqcc::parse_config_file(o.config_path);
  const harqcc::ModeGraph g =
      harqcc::scenario_graph(cfg.scenario, cfg.qos.rate);
  const harqcc::CompanionMatrix a =
      harqcc::alpha_matrix(g, cfg.qos.theta, cfg.qos.rate);
  write_output(resolved_out(o, cfg),
               harqcc::render_matrix_csv(a, cfg.qos.theta == 0.0));
  return 0;
}

int cmd_validate(const CommonOpts& o, const std::string& suite,
                 double tolerance_scale) {
  harqcc::ValidationOptions opt;
  std::string out = o.out_path;
  if (!o.config_path.empty()) {
    const ScenarioConfig cfg = harqcc::parse_config_file(o.config_path);
    if (cfg.seed_given) opt.seed = cfg.plan.seed;
    opt.threads = cfg.plan.threads;
    if (out.empty()) out = cfg.out_path;
  }
  if (o.seed) opt.seed = *o.seed;
  opt.full = suite == "full";
  opt.tolerance_scale = tolerance_scale;

  const auto checks = harqcc::run_validation(opt);
  std::fputs(harqcc::format_report(checks).c_str(), stdout);
  if (!out.empty()) {
    nlohmann::json j;
    j["suite"] = suite;
    j["seed"] = opt.seed;
    j["all_passed"] = harqcc::all_passed(checks);
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
      j["checks"].push_back(
          {{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    write_output(out, j.dump(2) + "\n");
  }
  return harqcc::all_passed(checks) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Outage and effective-capacity calculator for relay-assisted "
      "retransmission links"};
  app.require_subcommand(1);

  CommonOpts opts;
  bool mc = false;
  std::string suite = "quick";
  double tolerance_scale = 1.0;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", opts.config_path,
                              "scenario configuration file");
    if (config_required) c->required();
    sub->add_option("--seed", opts.seed, "override the sampling seed");
    sub->add_option("--out", opts.out_path,
                    "output file (default: [output] path or stdout)");
  };

  CLI::App* outage =
      app.add_subcommand("outage", "outage probability curve (CSV)");
  add_common(outage, true);
  outage->add_flag("--mc", mc, "add Monte Carlo estimate columns");

  CLI::App* ec =
      app.add_subcommand("ec", "effective-capacity sweep (CSV)");
  add_common(ec, true);

  CLI::App* matrix =
      app.add_subcommand("matrix", "companion-matrix dump (CSV)");
  add_common(matrix, true);

  CLI::App* validate =
      app.add_subcommand("validate", "run the self-check suite");
  add_common(validate, false);
  validate->add_option("--suite", suite, "check suite: quick or full")
      ->check(CLI::IsMember({"quick", "full"}));
  validate
      ->add_option("--tolerance-scale", tolerance_scale,
                   "multiply every pass tolerance (testing hook)")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (outage->parsed()) return cmd_outage(opts, mc);
    if (ec->parsed()) return cmd_ec(opts);
    if (matrix->parsed()) return cmd_matrix(opts);
    return cmd_validate(opts, suite, tolerance_scale);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  }
}
