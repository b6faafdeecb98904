#pragma once

#include <cstdint>

#include "harqcc/effective_capacity.hpp"

namespace harqcc {

// Simulation sizing. Defaults favor tight estimates over speed; tests and
// the CLI shrink them explicitly where speed matters.
struct SimPlan {
  std::uint64_t seed = 1;
  std::uint64_t samples = 1'000'000;  // outage estimation
  int block_length = 2000;            // slots per service-process block
  int blocks = 10'000;                // independent service-process blocks
  int threads = 0;                    // <= 0: hardware default
};

enum class OutageScheme {
  kArq,         // single attempt
  kRrSource,    // k1 repeated copies, summed
  kRrCombined,  // k1 source + k2 relay copies, summed
  kIrSource,    // k1 copies, mutual information accumulated
  kIrCombined,  // k1 source + k2 relay copies, mutual information accumulated
};

// Links and copy counts for one outage event. `second`/`second_count`
// are only read by the combined schemes.
struct OutageParams {
  LinkParams first{1.0, 1.0};
  int first_count = 1;
  LinkParams second{1.0, 1.0};
  int second_count = 1;
  double rate = 1.0;
};

struct OutageEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t failures = 0;
  std::uint64_t samples = 0;
};

// Empirical outage probability from independent fading realizations.
// Deterministic for a given plan, bit-identical across thread counts.
OutageEstimate estimate_outage(OutageScheme scheme, const OutageParams& params,
                               const SimPlan& plan);

// Canonical scheme labels, matching the config-file tokens.
const char* outage_scheme_name(OutageScheme scheme);

// Closed-form counterpart of estimate_outage for the same scheme/parameter
// encoding; the validation suite and the CLI compare the two directly.
double closed_form_outage(OutageScheme scheme, const OutageParams& params);

struct SharedDominance {
  std::uint64_t rr_failures = 0;
  std::uint64_t ir_failures = 0;
  std::uint64_t ir_only_failures = 0;  // IR failed where RR succeeded
  std::uint64_t samples = 0;
};

// Evaluates the summed-copy and accumulated-information events on the
// same gain draws, counting per-realization dominance violations.
SharedDominance ir_rr_shared_sample(const OutageParams& params,
                                    const SimPlan& plan);

struct ServiceEstimate {
  double value = 0.0;
  double ci_halfwidth = 0.0;  // bootstrap 95% half-width
  bool degenerate = false;    // every block delivered the same total
};

// Empirical effective capacity: walks the mode chain from mode 0 for
// `blocks` independent blocks of `block_length` slots and evaluates the
// exponential-moment estimator on the per-block delivered totals.
// Deterministic for a given plan, bit-identical across thread counts.
ServiceEstimate simulate_service_process(const ModeGraph& g,
                                         const QosSpec& qos,
                                         const SimPlan& plan);

}  // namespace harqcc
