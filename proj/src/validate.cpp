#include "harqcc/validate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "harqcc/distributions.hpp"
#include "harqcc/effective_capacity.hpp"
#include "harqcc/mode_graph.hpp"
#include "harqcc/monte_carlo.hpp"
#include "harqcc/outage.hpp"
#include "harqcc/rng.hpp"
#include "harqcc/threads.hpp"

namespace harqcc {

namespace {

constexpr std::uint64_t kStreamProduct = 0xDA7A;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Tracks the single worst deviation seen, normalized by its tolerance, so a
// check can report "worst |dev| = x (tol y) at <where>".
struct Worst {
  double ratio = -1.0;  // |deviation| / tolerance
  double dev = 0.0;
  double tol = 0.0;
  std::string where;

  void feed(double deviation, double tolerance, std::string at) {
    const double r =
        tolerance > 0.0 ? std::abs(deviation) / tolerance
                        : (deviation == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    if (r > ratio) {
      ratio = r;
      dev = std::abs(deviation);
      tol = tolerance;
      where = std::move(at);
    }
  }
  bool ok() const { return ratio <= 1.0; }
};

CheckResult finish(const char* name, const Worst& w, int points,
                   const char* what) {
  CheckResult r;
  r.name = name;
  r.passed = w.ok();
  r.detail = fmt("%d %s checked; worst |dev| = %.3g (tol %.3g) at %s", points,
                 what, w.dev, w.tol, w.where.c_str());
  return r;
}

// Deterministic parallel counter: splits [0, n) into fixed 64Ki chunks so the
// integer tally is identical for any worker count.
template <typename Fn>
std::uint64_t count_parallel(std::uint64_t n, int threads, Fn&& hit) {
  const std::uint64_t chunk = 1 << 16;
  const int workers = resolve_threads(threads);
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> total{0};
  auto run = [&] {
    for (;;) {
      const std::uint64_t lo = next.fetch_add(chunk);
      if (lo >= n) return;
      const std::uint64_t hi = std::min(n, lo + chunk);
      std::uint64_t local = 0;
      for (std::uint64_t i = lo; i < hi; ++i)
        if (hit(i)) ++local;
      total.fetch_add(local);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  return total.load();
}

double erlang_pdf(int k, double mu, double x) {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return k == 1 ? mu : 0.0;
  double lg = 0.0;
  for (int i = 2; i < k; ++i) lg += std::log(static_cast<double>(i));
  return std::exp(k * std::log(mu) + (k - 1) * std::log(x) - mu * x - lg);
}

// Simpson quadrature of the convolution integral
//   P(A + B <= t) = int_0^t pdf_A(x) * cdf_B(t - x) dx
// used as an independent oracle for the two-component sum distribution.
double convolved_sum_cdf(ErlangGroup a, ErlangGroup b, double t) {
  const int n = 4000;  // even
  const double h = t / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = i * h;
    const double f = erlang_pdf(a.count, a.rate, x) *
                     erlang_cdf(b.count, b.rate, t - x);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * f;
  }
  return acc * h / 3.0;
}

std::string point_label(OutageScheme s, const OutageParams& p, double db) {
  return fmt("%s snr=%gdB R=%g k=(%d,%d)", outage_scheme_name(s), db, p.rate,
             p.first_count, p.second_count);
}

// Shared outage grid: SNR x rate x retry budgets, combined schemes run with
// an unbalanced second link (+4 dB, weaker fading) plus one balanced point.
struct OutagePoint {
  OutageScheme scheme;
  OutageParams params;
  double db;
};

std::vector<OutagePoint> outage_grid() {
  const double dbs[] = {0.0, 5.0, 10.0, 20.0};
  const double rates[] = {0.5, 1.0, 2.0, 4.0};
  const std::pair<int, int> combos[] = {{1, 1}, {2, 1}, {1, 2}, {2, 2}, {4, 3}};
  std::vector<OutagePoint> grid;
  for (double db : dbs) {
    for (double rate : rates) {
      const LinkParams sd{snr_from_db(db), 1.0};
      const LinkParams rd{snr_from_db(db + 4.0), 0.8};
      OutageParams base;
      base.first = sd;
      base.rate = rate;
      grid.push_back({OutageScheme::kArq, base, db});
      for (int k = 2; k <= 4; ++k) {
        OutageParams p = base;
        p.first_count = k;
        grid.push_back({OutageScheme::kRrSource, p, db});
        grid.push_back({OutageScheme::kIrSource, p, db});
      }
      for (auto [l, k2] : combos) {
        OutageParams p = base;
        p.first_count = l;
        p.second = rd;
        p.second_count = k2;
        grid.push_back({OutageScheme::kRrCombined, p, db});
        grid.push_back({OutageScheme::kIrCombined, p, db});
      }
      OutageParams sym = base;
      sym.first_count = 2;
      sym.second = sd;
      sym.second_count = 2;
      grid.push_back({OutageScheme::kRrCombined, sym, db});
      grid.push_back({OutageScheme::kIrCombined, sym, db});
    }
  }
  return grid;
}

}  // namespace

CheckResult check_matrix_fidelity(const ValidationOptions& opt) {
  // Distinct sentinel probabilities injected straight into the transition
  // tables; every nonzero matrix entry must reproduce its hand-derived
  // expression exactly, and every structural zero must be a literal 0.
  const double qsd[2] = {0.11, 0.13};
  const double qsr[2] = {0.17, 0.19};
  const double qc[2][2] = {{0.23, 0.29}, {0.31, 0.37}};
  const double th = 0.7, rate = 1.3;
  const double e = std::exp(-th * rate);

  auto tables = [&](int m, int n) {
    OutageTablesII t;
    t.source_budget = m;
    t.relay_budget = n;
    for (int l = 1; l <= m; ++l) {
      t.q_sd.push_back(qsd[l - 1]);
      t.q_sr.push_back(qsr[l - 1]);
      for (int i = 1; i <= n; ++i) t.q_srd.push_back(qc[l - 1][i - 1]);
    }
    return t;
  };

  Worst w;
  int cells = 0;
  auto compare = [&](const CompanionMatrix& got,
                     const std::vector<std::vector<double>>& want,
                     const char* label) {
    if (got.size != static_cast<int>(want.size())) {
      w.feed(1.0, 0.0, fmt("%s: size %d != %zu", label, got.size, want.size()));
      return;
    }
    for (int r = 0; r < got.size; ++r)
      for (int c = 0; c < got.size; ++c) {
        ++cells;
        const double want_rc = want[r][c];
        const std::string at = fmt("%s cell (%d,%d)", label, r, c);
        if (want_rc == 0.0)
          w.feed(got.at(r, c), 0.0, at);
        else
          w.feed(got.at(r, c) - want_rc,
                 1e-14 * opt.tolerance_scale * std::abs(want_rc), at);
      }
  };

  compare(alpha_matrix(build_strategy1({0.41, 0.43, 0.47}), th, rate),
          {{0.41 * 0.43 + 0.59 * e, 0.53 * e}, {0.41 * 0.57, 0.47}},
          "fallback");

  const double q11 = qc[0][0], q12 = qc[0][1], q21 = qc[1][0], q22 = qc[1][1];
  compare(alpha_matrix(build_strategy2(tables(1, 1)), th, rate),
          {{qsd[0] * qsr[0] + (1 - qsd[0]) * e, q11 + (1 - q11) * e},
           {qsd[0] * (1 - qsr[0]), 0.0}},
          "combining(1,1)");
  compare(alpha_matrix(build_strategy2(tables(1, 2)), th, rate),
          {{qsd[0] * qsr[0] + (1 - qsd[0]) * e, (1 - q11) * e,
            q12 + (1 - q12) * e},
           {qsd[0] * (1 - qsr[0]), 0.0, 0.0},
           {0.0, q11, 0.0}},
          "combining(1,2)");
  compare(alpha_matrix(build_strategy2(tables(2, 1)), th, rate),
          {{(1 - qsd[0]) * e, q11 + (1 - q11) * e,
            qsd[1] * qsr[1] + (1 - qsd[1]) * e, q21 + (1 - q21) * e},
           {qsd[0] * (1 - qsr[0]), 0.0, 0.0, 0.0},
           {qsd[0] * qsr[0], 0.0, 0.0, 0.0},
           {0.0, 0.0, qsd[1] * (1 - qsr[1]), 0.0}},
          "combining(2,1)");
  compare(alpha_matrix(build_strategy2(tables(2, 2)), th, rate),
          {{(1 - qsd[0]) * e, (1 - q11) * e, q12 + (1 - q12) * e,
            qsd[1] * qsr[1] + (1 - qsd[1]) * e, (1 - q21) * e,
            q22 + (1 - q22) * e},
           {qsd[0] * (1 - qsr[0]), 0.0, 0.0, 0.0, 0.0, 0.0},
           {0.0, q11, 0.0, 0.0, 0.0, 0.0},
           {qsd[0] * qsr[0], 0.0, 0.0, 0.0, 0.0, 0.0},
           {0.0, 0.0, 0.0, qsd[1] * (1 - qsr[1]), 0.0, 0.0},
           {0.0, 0.0, 0.0, 0.0, q21, 0.0}},
          "combining(2,2)");

  return finish("matrix-fidelity", w, cells, "matrix cells");
}

CheckResult check_reduction_identities(const ValidationOptions& opt) {
  Worst w;
  int points = 0;
  const double dbs[] = {0.0, 5.0, 10.0, 20.0};
  const double fvs[] = {1.0, 1.3};
  const double rates[] = {0.5, 1.0, 2.0, 4.0};
  for (double db : dbs)
    for (double fv : fvs)
      for (double rate : rates) {
        const LinkParams link{snr_from_db(db), fv};
        const RateThreshold rt = make_rate(rate);
        const double arq = arq_outage(link, rt);
        ++points;
        w.feed(rr_source_outage(link, 1, rt) - arq,
               1e-12 * opt.tolerance_scale,
               fmt("single-round repeat, snr=%gdB fv=%g R=%g", db, fv, rate));
        ++points;
        w.feed(ir_source_outage(link, 1, rt) - arq, 1e-8 * opt.tolerance_scale,
               fmt("single-round accumulate, snr=%gdB fv=%g R=%g", db, fv,
                   rate));
        // With identical links the combined repeat scheme is a plain
        // (l + k2)-stage gamma sum.
        for (int l = 1; l <= 3; ++l)
          for (int k2 = 1; k2 <= 3; ++k2) {
            ++points;
            w.feed(rr_combined_outage(link, link, l, k2, rt) -
                       erlang_cdf(l + k2, link_exp_rate(link), rt.threshold),
                   1e-10 * opt.tolerance_scale,
                   fmt("balanced combined l=%d k2=%d snr=%gdB fv=%g R=%g", l,
                       k2, db, fv, rate));
          }
      }
  return finish("reduction-identities", w, points, "identities");
}

CheckResult check_outage_vs_mc(const ValidationOptions& opt) {
  SimPlan plan;
  plan.seed = opt.seed;
  plan.samples = opt.full ? 1'000'000 : 200'000;
  plan.threads = opt.threads;

  Worst w;
  int compared = 0, skipped = 0;
  for (const auto& pt : outage_grid()) {
    const double closed = closed_form_outage(pt.scheme, pt.params);
    if (closed < 1e-3) {  // too rare to resolve at this sample count
      ++skipped;
      continue;
    }
    const auto est = estimate_outage(pt.scheme, pt.params, plan);
    const double n = static_cast<double>(est.samples);
    const double se_null = std::sqrt(closed * (1.0 - closed) / n);
    const double se = std::max(est.std_error, se_null);
    ++compared;
    w.feed(est.value - closed, 3.0 * se * opt.tolerance_scale,
           point_label(pt.scheme, pt.params, pt.db));
  }
  CheckResult r = finish("outage-vs-mc", w, compared, "grid points");
  r.detail += fmt("; %d skipped below 1e-3", skipped);
  return r;
}

CheckResult check_combining_dominance(const ValidationOptions& opt) {
  Worst w;
  int points = 0;
  // Closed forms: mutual-information accumulation can never lose to plain
  // repetition of the same rounds.
  for (const auto& pt : outage_grid()) {
    OutageScheme rr, ir;
    if (pt.scheme == OutageScheme::kRrSource) {
      rr = OutageScheme::kRrSource;
      ir = OutageScheme::kIrSource;
    } else if (pt.scheme == OutageScheme::kRrCombined) {
      rr = OutageScheme::kRrCombined;
      ir = OutageScheme::kIrCombined;
    } else {
      continue;
    }
    const double p_rr = closed_form_outage(rr, pt.params);
    const double p_ir = closed_form_outage(ir, pt.params);
    ++points;
    w.feed(std::max(0.0, p_ir - p_rr), 1e-12 * opt.tolerance_scale,
           point_label(rr, pt.params, pt.db));
  }

  // Pathwise: on shared channel draws the accumulation decoder must succeed
  // whenever the repetition decoder does, sample by sample.
  SimPlan plan;
  plan.seed = opt.seed;
  plan.samples = opt.full ? 1'000'000 : 200'000;
  plan.threads = opt.threads;
  std::uint64_t violations = 0, runs = 0;
  for (double db : {0.0, 10.0}) {
    for (double rate : {1.0, 3.0}) {
      for (auto [l, k2] : {std::pair{1, 1}, {2, 2}, {3, 1}}) {
        OutageParams p;
        p.first = {snr_from_db(db), 1.0};
        p.second = {snr_from_db(db + 4.0), 0.8};
        p.first_count = l;
        p.second_count = k2;
        p.rate = rate;
        const auto shared = ir_rr_shared_sample(p, plan);
        violations += shared.ir_only_failures;
        ++runs;
        if (shared.ir_only_failures > 0)
          w.feed(static_cast<double>(shared.ir_only_failures), 0.0,
                 fmt("pathwise snr=%gdB R=%g k=(%d,%d)", db, rate, l, k2));
      }
    }
  }
  CheckResult r = finish("combining-dominance", w, points, "closed-form pairs");
  r.detail += fmt("; %llu pathwise violations in %llu runs",
                  static_cast<unsigned long long>(violations),
                  static_cast<unsigned long long>(runs * plan.samples));
  return r;
}

CheckResult check_distribution_oracles(const ValidationOptions& opt) {
  Worst w;
  int points = 0;

  // Two-component gamma-sum CDF vs direct Simpson convolution.
  struct SumCase {
    ErlangGroup a, b;
    double t;
  };
  const SumCase sums[] = {
      {{1, 1.0}, {1, 2.0}, 1.5},  {{2, 0.7}, {3, 1.3}, 2.0},
      {{3, 2.2}, {1, 0.4}, 4.0},  {{2, 1.0}, {2, 1.02}, 3.0},
      {{4, 1.5}, {3, 1.5}, 3.5},
  };
  for (const auto& s : sums) {
    ++points;
    w.feed(two_erlang_sum_cdf(s.a, s.b, s.t) - convolved_sum_cdf(s.a, s.b, s.t),
           1e-6 * opt.tolerance_scale,
           fmt("sum (%d,%g)+(%d,%g) t=%g", s.a.count, s.a.rate, s.b.count,
               s.b.rate, s.t));
  }

  // Product-of-shifted-exponentials CDF vs direct Monte Carlo.
  struct ProdCase {
    std::vector<ShiftedExpGroup> groups;
    double z;
  };
  const ProdCase prods[] = {
      {{{1, 1.0, 1.0}}, 2.0},
      {{{2, 0.8, 1.0}}, 3.0},
      {{{1, 1.0, 1.0}, {1, 0.5, 1.0}}, 4.0},
      {{{2, 1.2, 1.0}, {1, 0.6, 1.3}}, 5.0},
      {{{1, 2.0, 1.5}, {2, 0.9, 1.0}}, 6.0},
  };
  const std::uint64_t samples = opt.full ? 10'000'000 : 1'000'000;
  int case_no = 0;
  for (const auto& pc : prods) {
    ++case_no;
    const double closed = shifted_exp_product_cdf(pc.groups, pc.z);
    const std::uint64_t stride = 8;
    const std::uint64_t case_base =
        static_cast<std::uint64_t>(case_no) << 32;
    const std::uint64_t hits = count_parallel(
        samples, opt.threads, [&](std::uint64_t i) {
          std::uint64_t idx = case_base + i * stride;
          double prod = 1.0;
          for (const auto& g : pc.groups)
            for (int c = 0; c < g.count; ++c)
              prod *= g.alpha +
                      sample_exponential(g.rate, opt.seed, kStreamProduct,
                                         idx++);
          return prod <= pc.z;
        });
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    const double se = std::sqrt(std::max(closed * (1.0 - closed),
                                         p * (1.0 - p)) /
                                static_cast<double>(samples));
    ++points;
    w.feed(p - closed, 3.0 * se * opt.tolerance_scale,
           fmt("product case %d z=%g", case_no, pc.z));
  }

  // The inversion contour is a free parameter; the answer must not move.
  for (const auto& pc : {prods[2], prods[3], prods[4]}) {
    const double mid = shifted_exp_product_cdf(pc.groups, pc.z, {-0.5, 1e-9});
    for (double absc : {-0.3, -0.7}) {
      ++points;
      w.feed(shifted_exp_product_cdf(pc.groups, pc.z, {absc, 1e-9}) - mid,
             1e-7 * opt.tolerance_scale,
             fmt("contour shift %.1f z=%g", absc, pc.z));
    }
  }
  return finish("distribution-oracles", w, points, "oracle comparisons");
}

CheckResult check_capacity_vs_simulation(const ValidationOptions& opt) {
  // Random scenario draw is fixed so the verdict set is stable; the run
  // seed only drives the simulation noise.
  std::mt19937_64 gen(0x7e57c0f1u);
  std::uniform_real_distribution<double> udb(18.0, 28.0);
  std::uniform_real_distribution<double> urate(0.75, 2.5);
  std::uniform_real_distribution<double> uexp(0.15, 0.6);
  std::uniform_int_distribution<int> ubudget(1, 4);

  SimPlan plan;
  plan.block_length = opt.full ? 2000 : 1000;
  plan.blocks = opt.full ? 10'000 : 2'000;
  plan.threads = opt.threads;

  const int cases = opt.full ? 20 : 6;
  Worst w;
  for (int i = 0; i < cases; ++i) {
    ScenarioSpec spec;
    spec.strategy = Strategy::kChainCombining;
    spec.combining = (i % 2 == 0) ? Combining::kRepeat : Combining::kMutualInfo;
    spec.sd = {snr_from_db(udb(gen)), 1.0};
    spec.sr = {snr_from_db(udb(gen)), 1.0};
    spec.rd = {snr_from_db(udb(gen)), 1.0};
    spec.source_budget = ubudget(gen);
    spec.relay_budget = ubudget(gen);
    const double rate = urate(gen);
    const double theta = uexp(gen) / rate;
    const QosSpec qos{theta, rate};

    const ModeGraph g = scenario_graph(spec, rate);
    const double closed = effective_capacity(g, qos);
    plan.seed = counter_hash(opt.seed, 0xECEC, static_cast<std::uint64_t>(i));
    const auto est = simulate_service_process(g, qos, plan);
    w.feed(est.value - closed, 0.02 * closed * opt.tolerance_scale,
           fmt("%s M=%d N=%d snr=(%.1f,%.1f,%.1f)dB R=%.2f theta=%.3f",
               combining_name(spec.combining), spec.source_budget,
               spec.relay_budget, snr_to_db(spec.sd.snr),
               snr_to_db(spec.sr.snr), snr_to_db(spec.rd.snr), rate, theta));
  }
  CheckResult r = finish("capacity-vs-simulation", w, cases, "scenarios");
  r.detail += " (2% relative)";
  return r;
}

CheckResult check_capacity_structure(const ValidationOptions& opt) {
  Worst w;
  int points = 0;

  // Random scenarios: the per-block decay factor must stay inside its
  // theoretical bracket and the resulting capacity inside [0, rate].
  std::mt19937_64 gen(0xBEEF5EEDu);
  std::uniform_real_distribution<double> udb(0.0, 30.0);
  std::uniform_real_distribution<double> ufv(0.5, 2.0);
  std::uniform_real_distribution<double> urate(0.25, 4.0);
  std::uniform_real_distribution<double> utheta(0.1, 8.0);
  std::uniform_int_distribution<int> ubudget(1, 4);
  for (int i = 0; i < 60; ++i) {
    ScenarioSpec spec;
    spec.strategy = (i % 3 == 0) ? Strategy::kRelayFallback
                                 : Strategy::kChainCombining;
    spec.combining = (i % 2 == 0) ? Combining::kRepeat : Combining::kMutualInfo;
    spec.sd = {snr_from_db(udb(gen)), ufv(gen)};
    spec.sr = {snr_from_db(udb(gen)), ufv(gen)};
    spec.rd = {snr_from_db(udb(gen)), ufv(gen)};
    spec.source_budget = ubudget(gen);
    spec.relay_budget = ubudget(gen);
    const double rate = urate(gen);
    const double theta = utheta(gen);
    const ModeGraph g = scenario_graph(spec, rate);
    const double lam = spectral_radius(alpha_matrix(g, theta, rate));
    const double lo = std::exp(-theta * rate);
    ++points;
    w.feed(std::max({0.0, lo * (1.0 - 1e-9) - lam, lam - (1.0 + 1e-9)}),
           1e-12 * opt.tolerance_scale, fmt("decay bracket case %d", i));
    const double ec = effective_capacity(g, {theta, rate});
    ++points;
    w.feed(std::max({0.0, -ec, ec - rate}), 1e-12 * opt.tolerance_scale,
           fmt("capacity range case %d", i));
  }

  // Effectively noiseless regime: capacity must reach the offered rate.
  for (Combining c : {Combining::kRepeat, Combining::kMutualInfo}) {
    ScenarioSpec spec;
    spec.strategy = Strategy::kChainCombining;
    spec.combining = c;
    spec.sd = spec.sr = spec.rd = {snr_from_db(40.0), 1.0};
    spec.source_budget = spec.relay_budget = 1;
    const double ec = effective_capacity(spec, {1.0, 1.0});
    ++points;
    w.feed(std::max(0.0, 0.99 - ec), 1e-12 * opt.tolerance_scale,
           fmt("high-snr floor (%s)", combining_name(c)));
  }

  // Capacity is nonincreasing in the decay exponent.
  ScenarioSpec mono[3];
  mono[0].strategy = Strategy::kChainCombining;
  mono[0].combining = Combining::kRepeat;
  mono[0].sd = mono[0].sr = mono[0].rd = {snr_from_db(10.0), 1.0};
  mono[0].source_budget = mono[0].relay_budget = 2;
  mono[1].strategy = Strategy::kChainCombining;
  mono[1].combining = Combining::kMutualInfo;
  mono[1].sd = {snr_from_db(8.0), 1.2};
  mono[1].sr = {snr_from_db(12.0), 0.9};
  mono[1].rd = {snr_from_db(6.0), 1.1};
  mono[1].source_budget = 3;
  mono[1].relay_budget = 1;
  mono[2].strategy = Strategy::kRelayFallback;
  mono[2].sd = {snr_from_db(5.0), 1.0};
  mono[2].sr = {snr_from_db(9.0), 1.3};
  mono[2].rd = {snr_from_db(7.0), 0.8};
  const double thetas[] = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  for (int m = 0; m < 3; ++m) {
    double prev = std::numeric_limits<double>::infinity();
    for (double th : thetas) {
      const double ec = effective_capacity(mono[m], {th, 1.0});
      ++points;
      w.feed(std::max(0.0, ec - prev), 1e-12 * opt.tolerance_scale,
             fmt("monotone case %d theta=%g", m, th));
      prev = ec;
    }
    // Zero exponent: the weight matrix must be column-stochastic.
    const ModeGraph g = scenario_graph(mono[m], 1.0);
    const CompanionMatrix a = alpha_matrix(g, 0.0, 1.0);
    for (int col = 0; col < a.size; ++col) {
      double s = 0.0;
      for (int row = 0; row < a.size; ++row) s += a.at(row, col);
      ++points;
      w.feed(s - 1.0, 1e-10 * opt.tolerance_scale,
             fmt("column sum case %d col %d", m, col));
    }
  }
  return finish("capacity-structure", w, points, "structural checks");
}

CheckResult check_strategy_gap(const ValidationOptions& opt) {
  // Chain combining with a single relay round must dominate the fallback
  // strategy pointwise, and its head start (in dB at fixed capacity) must
  // widen as the decay exponent grows.
  const double rate = 4.0;
  // Both strategies cross this level inside the 0-40 dB window at both
  // exponents; at stiffer levels the theta=4 curves saturate below it.
  const double level = 1.0;
  Worst w;
  int points = 0;

  auto curve = [&](Strategy s, double theta) {
    std::vector<double> dbs, ys;
    for (int db = 0; db <= 40; db += 2) {
      ScenarioSpec spec;
      spec.strategy = s;
      spec.combining = Combining::kRepeat;
      spec.sd = spec.sr = spec.rd = {snr_from_db(db), 1.0};
      spec.source_budget = spec.relay_budget = 1;
      dbs.push_back(db);
      ys.push_back(effective_capacity(spec, {theta, rate}));
    }
    return std::pair{dbs, ys};
  };
  auto crossing = [&](const std::vector<double>& xs,
                      const std::vector<double>& ys) {
    for (size_t i = 1; i < ys.size(); ++i)
      if (ys[i] >= level && ys[i - 1] < level)
        return xs[i - 1] + (xs[i] - xs[i - 1]) * (level - ys[i - 1]) /
                               (ys[i] - ys[i - 1]);
    return std::numeric_limits<double>::quiet_NaN();
  };

  double gap[2] = {0.0, 0.0};
  const double thetas[2] = {1.0, 4.0};
  for (int t = 0; t < 2; ++t) {
    const auto [xs, y1] = curve(Strategy::kRelayFallback, thetas[t]);
    const auto [xs2, y2] = curve(Strategy::kChainCombining, thetas[t]);
    for (size_t i = 0; i < xs.size(); ++i) {
      ++points;
      w.feed(std::max(0.0, y1[i] - y2[i]), 1e-12 * opt.tolerance_scale,
             fmt("pointwise theta=%g snr=%gdB", thetas[t], xs[i]));
    }
    const double x1 = crossing(xs, y1), x2 = crossing(xs2, y2);
    if (std::isnan(x1) || std::isnan(x2)) {
      w.feed(1.0, 0.0, fmt("level %.1f not bracketed at theta=%g", level,
                           thetas[t]));
      continue;
    }
    gap[t] = x1 - x2;
  }
  ++points;
  w.feed(std::max(0.0, gap[0] - gap[1]), 1e-12 * opt.tolerance_scale,
         fmt("gap growth: %.2fdB at theta=1 vs %.2fdB at theta=4", gap[0],
             gap[1]));
  CheckResult r = finish("strategy-gap", w, points, "curve comparisons");
  r.detail += fmt("; gap %.2fdB -> %.2fdB", gap[0], gap[1]);
  return r;
}

std::vector<CheckResult> run_validation(const ValidationOptions& opt) {
  std::vector<CheckResult> out;
  out.push_back(check_matrix_fidelity(opt));
  out.push_back(check_reduction_identities(opt));
  out.push_back(check_capacity_structure(opt));
  out.push_back(check_strategy_gap(opt));
  out.push_back(check_distribution_oracles(opt));
  out.push_back(check_outage_vs_mc(opt));
  out.push_back(check_combining_dominance(opt));
  out.push_back(check_capacity_vs_simulation(opt));
  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::string format_report(const std::vector<CheckResult>& checks) {
  std::string out;
  int passed = 0;
  for (const auto& c : checks) {
    out += c.passed ? "PASS  " : "FAIL  ";
    out += c.name;
    out += ": ";
    out += c.detail;
    out += "\n";
    if (c.passed) ++passed;
  }
  out += fmt("result: %s (%d/%zu checks passed)\n",
             passed == static_cast<int>(checks.size()) ? "PASS" : "FAIL",
             passed, checks.size());
  return out;
}

}  // namespace harqcc
