#pragma once

#include <string>
#include <utility>
#include <vector>

#include "harqcc/mode_graph.hpp"

namespace harqcc {

// Statistical delay constraint: the tail of the queue length decays like
// e^{-theta * q}. theta must be strictly positive; rate is the per-slot
// transmission rate in bits/s/Hz.
struct QosSpec {
  double theta = 1.0;
  double rate = 1.0;
};

// Largest eigenvalue magnitude of a nonnegative square matrix.
double spectral_radius(const CompanionMatrix& a);

// Effective capacity of the retransmission chain: -ln(radius)/theta, where
// the radius is taken over the modes reachable from mode 0. The result is
// clamped to [0, rate]. Throws std::domain_error if the radius exceeds one
// beyond rounding, std::invalid_argument for theta <= 0 or rate <= 0.
double effective_capacity(const CompanionMatrix& a, const QosSpec& qos);
double effective_capacity(const ModeGraph& g, const QosSpec& qos);

enum class Strategy { kRelayFallback = 1, kChainCombining = 2 };

// A full link-layer configuration: which chain, how copies combine, the
// per-phase retry budgets, and the three channels.
struct ScenarioSpec {
  Strategy strategy = Strategy::kChainCombining;
  Combining combining = Combining::kMutualInfo;
  int source_budget = 1;  // M
  int relay_budget = 1;   // N
  LinkParams sd{snr_from_db(10.0), 1.0};
  LinkParams sr{snr_from_db(10.0), 1.0};
  LinkParams rd{snr_from_db(10.0), 1.0};
  ContourSpec contour{};
};

// Builds the mode graph for the scenario at the given rate (closed-form
// outage tables plus chain wiring). Budgets and combining are ignored by
// the relay-fallback strategy.
ModeGraph scenario_graph(const ScenarioSpec& s, double rate);

double effective_capacity(const ScenarioSpec& s, const QosSpec& qos);

enum class SweepAxis { kSnrDb, kRate, kTheta };

struct SweepSpec {
  SweepAxis axis = SweepAxis::kSnrDb;
  std::vector<double> values;
};

// One computed curve: xs/ys hold the points that evaluated cleanly;
// diagnostics records any skipped point with the reason. params carries
// key=value metadata for output headers.
struct CurveTable {
  std::string x_name;
  std::string y_name;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> diagnostics;
};

// Sweeps effective capacity along one axis. The snr_db axis applies the
// value to all three links; rate and theta axes override the matching QoS
// field. threads <= 0 picks the hardware default (see resolve_threads).
CurveTable ec_sweep(const ScenarioSpec& s, const QosSpec& qos,
                    const SweepSpec& sweep, int threads = 0);

const char* strategy_name(Strategy s);
const char* combining_name(Combining c);

}  // namespace harqcc
