#pragma once

#include <cstdint>
#include <vector>

#include "harqcc/specfun.hpp"

namespace harqcc {

// P{Erlang(k, rate) <= t}; k >= 1, rate > 0, t >= 0.
double erlang_cdf(int k, double rate, double t);

struct ErlangGroup {
  int count = 1;
  double rate = 1.0;
};

// CDF at t of the independent sum Erlang(a.count, a.rate) +
// Erlang(b.count, b.rate).  Exact partial-fraction form for well-separated
// rates; a convergent same-sign series bridges nearly equal rates, and rates
// matching to 1e-6 relative collapse to a single Erlang.  Counts up to 32.
double two_erlang_sum_cdf(ErlangGroup a, ErlangGroup b, double t);

struct ShiftedExpGroup {
  int count = 1;
  double rate = 1.0;   // mu > 0
  double alpha = 1.0;  // location >= 0
};

// P{ Prod_groups Prod_{j<count} (alpha + X_j) <= z } with X_j ~ Exp(rate)
// independent. One or two groups.
double shifted_exp_product_cdf(const std::vector<ShiftedExpGroup>& groups,
                               double z, const ContourSpec& contour = {});

// Inverse-CDF samplers addressed by counter (see rng.hpp); index0 consumes
// `count` consecutive indices for the Erlang case.
double sample_exponential(double rate, std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index);
double sample_erlang(int count, double rate, std::uint64_t seed,
                     std::uint64_t stream, std::uint64_t index0);

}  // namespace harqcc
