#include "harqcc/effective_capacity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "harqcc/specfun.hpp"
#include "harqcc/threads.hpp"

namespace harqcc {

namespace {

constexpr int kMaxIters = 100000;
constexpr double kTol = 1e-13;

void check_matrix(const CompanionMatrix& m) {
  if (m.size < 1) throw std::invalid_argument("matrix must have size >= 1");
  if (m.a.size() != static_cast<size_t>(m.size) * m.size)
    throw std::invalid_argument("matrix storage does not match its size");
  for (double x : m.a)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument("matrix entries must be finite and >= 0");
}

// Power iteration with a Rayleigh-quotient estimate. `shift` adds
// shift * I, which separates the dominant eigenvalue of a (nearly)
// periodic nonnegative chain from its rotated copies. Returns false when
// the estimate has not settled; *out then carries the running maximum of
// the estimate, a usable anchor for choosing the next shift.
bool power_iterate(const CompanionMatrix& m, double shift, double* out) {
  const int n = m.size;
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n))), w(n);
  double lam = 0.0, prev = -1.0, prev2 = -2.0, peak = 0.0;
  int settled = 0;
  for (int it = 0; it < kMaxIters; ++it) {
    for (int r = 0; r < n; ++r) {
      double s = shift * v[r];
      for (int c = 0; c < n; ++c) s += m.at(r, c) * v[c];
      w[r] = s;
    }
    double norm = 0.0, ray = 0.0;
    for (int r = 0; r < n; ++r) {
      norm += w[r] * w[r];
      ray += v[r] * w[r];
    }
    norm = std::sqrt(norm);
    if (norm < 1e-280) {  // image collapsed: nilpotent direction, radius 0
      *out = 0.0;
      return true;
    }
    for (int r = 0; r < n; ++r) v[r] = w[r] / norm;
    lam = ray;
    peak = std::max(peak, lam);
    const double scale = std::max(std::abs(lam), 1e-300);
    settled = std::abs(lam - prev) <= kTol * scale ? settled + 1 : 0;
    if (settled >= 2) {
      *out = lam;
      return true;
    }
    // Period-2 signature: the estimate alternates between two levels.
    // Bail out early so the caller can retry shifted.
    if (it > 512 && std::abs(lam - prev2) <= 1e-9 * scale &&
        std::abs(lam - prev) > 1e-6 * scale)
      break;
    prev2 = prev;
    prev = lam;
  }
  *out = peak;
  return false;
}

std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

}  // namespace

double spectral_radius(const CompanionMatrix& m) {
  check_matrix(m);
  double est = 0.0;
  if (power_iterate(m, 0.0, &est)) return std::max(0.0, est);
  // Shifting by eps * I moves the dominant eigenvalue of a nonnegative
  // matrix to radius + eps exactly, while rotated same-magnitude
  // eigenvalues fall strictly inside. A shift comparable to the radius
  // itself gives the fastest separation, so anchor it on the unshifted
  // estimate before falling back to wider guesses.
  double lam = 0.0;
  for (double eps : {std::max(1e-8, 0.75 * est), std::max(1e-8, 3.0 * est)}) {
    if (power_iterate(m, eps, &lam)) return std::max(0.0, lam - eps);
  }
  throw AccuracyError(
      "spectral radius iteration did not settle; best estimate " + fmt_g(est),
      std::abs(lam), kTol);
}

namespace {

// Modes reachable from mode 0 following transitions with nonzero weight.
// Column c of the matrix holds the outgoing weights of mode c.
std::vector<int> reachable_modes(const CompanionMatrix& m) {
  std::vector<char> seen(m.size, 0);
  std::vector<int> stack{0}, order;
  seen[0] = 1;
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    order.push_back(c);
    for (int r = 0; r < m.size; ++r)
      if (!seen[r] && m.at(r, c) != 0.0) {
        seen[r] = 1;
        stack.push_back(r);
      }
  }
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

double effective_capacity(const CompanionMatrix& m, const QosSpec& qos) {
  if (!(qos.theta > 0.0) || !std::isfinite(qos.theta))
    throw std::invalid_argument("qos exponent theta must be positive");
  if (!(qos.rate > 0.0) || !std::isfinite(qos.rate))
    throw std::invalid_argument("rate must be positive");
  check_matrix(m);

  const auto keep = reachable_modes(m);
  double lam = 0.0;
  if (static_cast<int>(keep.size()) == m.size) {
    lam = spectral_radius(m);
  } else {
    CompanionMatrix sub;
    sub.size = static_cast<int>(keep.size());
    sub.a.assign(static_cast<size_t>(sub.size) * sub.size, 0.0);
    for (int r = 0; r < sub.size; ++r)
      for (int c = 0; c < sub.size; ++c) sub.at(r, c) = m.at(keep[r], keep[c]);
    lam = spectral_radius(sub);
  }

  if (lam > 1.0 + 1e-9)
    throw std::domain_error("mode-chain matrix has spectral radius " +
                            fmt_g(lam) + " > 1; matrix is malformed");
  if (!(lam > 0.0))
    throw std::domain_error(
        "mode-chain matrix has vanishing spectral radius; matrix is "
        "malformed");
  lam = std::min(lam, 1.0);
  const double ec = -std::log(lam) / qos.theta;
  return std::clamp(ec, 0.0, qos.rate);
}

double effective_capacity(const ModeGraph& g, const QosSpec& qos) {
  return effective_capacity(alpha_matrix(g, qos.theta, qos.rate), qos);
}

ModeGraph scenario_graph(const ScenarioSpec& s, double rate) {
  const RateThreshold rt = make_rate(rate);
  if (s.strategy == Strategy::kRelayFallback)
    return build_strategy1(make_tables_strategy1(s.sd, s.sr, s.rd, rt));
  if (s.source_budget < 1 || s.relay_budget < 1)
    throw std::invalid_argument("transmission budgets must be >= 1");
  return build_strategy2(make_tables_strategy2(s.sd, s.sr, s.rd,
                                               s.source_budget, s.relay_budget,
                                               s.combining, rt, s.contour));
}

double effective_capacity(const ScenarioSpec& s, const QosSpec& qos) {
  return effective_capacity(scenario_graph(s, qos.rate), qos);
}

const char* strategy_name(Strategy s) {
  return s == Strategy::kRelayFallback ? "fallback" : "combining";
}

const char* combining_name(Combining c) {
  return c == Combining::kRepeat ? "rr" : "ir";
}

namespace {

const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::kSnrDb:
      return "snr_db";
    case SweepAxis::kRate:
      return "rate";
    default:
      return "theta";
  }
}

}  // namespace

CurveTable ec_sweep(const ScenarioSpec& base, const QosSpec& qos,
                    const SweepSpec& sweep, int threads) {
  const auto& xs = sweep.values;
  if (xs.empty()) throw std::invalid_argument("sweep grid must be nonempty");
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]))
      throw std::invalid_argument("sweep grid values must be finite");
    if (i > 0 && !(xs[i] > xs[i - 1]))
      throw std::invalid_argument("sweep grid must be strictly increasing");
    if (sweep.axis != SweepAxis::kSnrDb && !(xs[i] > 0.0))
      throw std::invalid_argument("rate and theta grids must be positive");
  }
  if (!(qos.theta > 0.0) || !(qos.rate > 0.0))
    throw std::invalid_argument("qos parameters must be positive");

  // The theta axis leaves the outage tables untouched, so the graph is
  // built once and shared.
  ModeGraph shared;
  if (sweep.axis == SweepAxis::kTheta) shared = scenario_graph(base, qos.rate);

  struct Slot {
    bool ok = false;
    double y = 0.0;
    std::string err;
  };
  std::vector<Slot> slots(xs.size());

  auto eval = [&](size_t i) {
    try {
      QosSpec q = qos;
      if (sweep.axis == SweepAxis::kTheta) {
        q.theta = xs[i];
        slots[i].y = effective_capacity(shared, q);
      } else {
        ScenarioSpec s = base;
        if (sweep.axis == SweepAxis::kSnrDb)
          s.sd.snr = s.sr.snr = s.rd.snr = snr_from_db(xs[i]);
        else
          q.rate = xs[i];
        slots[i].y = effective_capacity(s, q);
      }
      slots[i].ok = true;
    } catch (const std::exception& e) {
      slots[i].err = e.what();
    }
  };

  const int workers =
      std::min<int>(resolve_threads(threads), static_cast<int>(xs.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < xs.size(); ++i) eval(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < xs.size();
             i = next.fetch_add(1))
          eval(i);
      });
    for (auto& t : pool) t.join();
  }

  CurveTable out;
  out.x_name = axis_name(sweep.axis);
  out.y_name = "effective_capacity";
  out.params.emplace_back("strategy", strategy_name(base.strategy));
  if (base.strategy == Strategy::kChainCombining) {
    out.params.emplace_back("combining", combining_name(base.combining));
    out.params.emplace_back("m", std::to_string(base.source_budget));
    out.params.emplace_back("n", std::to_string(base.relay_budget));
  }
  if (sweep.axis != SweepAxis::kSnrDb) {
    out.params.emplace_back("sd_snr_db", fmt_g(snr_to_db(base.sd.snr)));
    out.params.emplace_back("sr_snr_db", fmt_g(snr_to_db(base.sr.snr)));
    out.params.emplace_back("rd_snr_db", fmt_g(snr_to_db(base.rd.snr)));
  }
  if (base.sd.fading_variance != 1.0 || base.sr.fading_variance != 1.0 ||
      base.rd.fading_variance != 1.0) {
    out.params.emplace_back("sd_fading_variance",
                            fmt_g(base.sd.fading_variance));
    out.params.emplace_back("sr_fading_variance",
                            fmt_g(base.sr.fading_variance));
    out.params.emplace_back("rd_fading_variance",
                            fmt_g(base.rd.fading_variance));
  }
  if (sweep.axis != SweepAxis::kTheta)
    out.params.emplace_back("theta", fmt_g(qos.theta));
  if (sweep.axis != SweepAxis::kRate)
    out.params.emplace_back("rate", fmt_g(qos.rate));

  for (size_t i = 0; i < xs.size(); ++i) {
    if (slots[i].ok) {
      out.xs.push_back(xs[i]);
      out.ys.push_back(slots[i].y);
    } else {
      out.diagnostics.push_back("skipped " + std::string(out.x_name) + "=" +
                                fmt_g(xs[i]) + ": " + slots[i].err);
    }
  }
  return out;
}

}  // namespace harqcc
