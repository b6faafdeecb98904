#pragma once

#include <vector>

#include "harqcc/outage.hpp"

namespace harqcc {

enum class Combining { kRepeat, kMutualInfo };

// One transition of the retransmission chain. Modes are 0-based; mode 0 is
// where a fresh packet starts. bits counts packets delivered on the slot
// (0 or 1).
struct Transition {
  int from = 0;
  int to = 0;
  double prob = 0.0;
  int bits = 0;
};

struct ModeGraph {
  int mode_count = 0;
  std::vector<Transition> transitions;
};

// Per-attempt failure probabilities feeding the relay-fallback chain
// (strategy I): independent decoding on every attempt.
struct OutageTablesI {
  double q_sd = 0.0;
  double q_sr = 0.0;
  double q_rd = 0.0;
};

// Failure probabilities for the combining chain (strategy II).
// q_sd[l-1], q_sr[l-1]: after l source transmissions (l = 1..M).
// q_srd[(l-1)*N + i-1]: after l source plus i relay transmissions.
struct OutageTablesII {
  int source_budget = 1;  // M
  int relay_budget = 1;   // N
  std::vector<double> q_sd;
  std::vector<double> q_sr;
  std::vector<double> q_srd;
};

// Strategy I: the source repeats a packet until the destination gets it,
// unless the relay decoded first, in which case the relay takes over and
// repeats until delivery. Two modes: 0 = source transmits, 1 = relay
// transmits.
ModeGraph build_strategy1(const OutageTablesI& t);

// Strategy II: the source sends up to M combined copies; once the relay
// decodes, the relay sends up to N more. The packet is dropped when the
// budget runs out. Mode layout: source mode for round l at (l-1)(N+1);
// the N relay modes for round l follow it.
ModeGraph build_strategy2(const OutageTablesII& t);

OutageTablesI make_tables_strategy1(const LinkParams& sd, const LinkParams& sr,
                                    const LinkParams& rd,
                                    const RateThreshold& rt);

OutageTablesII make_tables_strategy2(const LinkParams& sd,
                                     const LinkParams& sr,
                                     const LinkParams& rd, int source_budget,
                                     int relay_budget, Combining combining,
                                     const RateThreshold& rt,
                                     const ContourSpec& contour = {});

// Row-major square matrix A with A[to][from] = sum over transitions of
// prob * e^{-theta * bits * rate}. Columns sum to one at theta = 0.
struct CompanionMatrix {
  int size = 0;
  std::vector<double> a;
  double at(int row, int col) const { return a[row * size + col]; }
  double& at(int row, int col) { return a[row * size + col]; }
};

CompanionMatrix alpha_matrix(const ModeGraph& g, double theta, double rate);

}  // namespace harqcc
