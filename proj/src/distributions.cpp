#include "harqcc/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "harqcc/rng.hpp"

namespace harqcc {

namespace {

constexpr int kMaxCount = 32;

void check_group(const ErlangGroup& g, const char* who) {
  if (g.count < 1 || g.count > kMaxCount)
    throw std::invalid_argument(std::string(who) + ": count out of range");
  if (!(g.rate > 0.0))
    throw std::invalid_argument(std::string(who) + ": rate must be positive");
}

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Partial fractions of mu1^k1 mu2^k2 / ((s+mu1)^k1 (s+mu2)^k2), inverted
// term by term. Valid when the rates are well separated; accumulate in long
// double because the terms alternate and grow as the rates approach.
double sum_cdf_partial_fractions(int k1, double mu1, int k2, double mu2,
                                 double t) {
  long double acc = 0.0L;
  const int k[2] = {k1, k2};
  const double mu[2] = {mu1, mu2};
  for (int i = 0; i < 2; ++i) {
    const int o = 1 - i;
    const double gap = mu[o] - mu[i];
    for (int j = 1; j <= k[i]; ++j) {
      const int m = k[i] - j;  // derivative order in the residue
      const double lmag = log_binom(k[o] + m - 1, m) +
                          m * std::log(mu[i]) + k[o] * std::log(mu[o]) -
                          (k[o] + m) * std::log(std::abs(gap));
      double sign = (m % 2 == 0) ? 1.0 : -1.0;
      if (gap < 0.0 && (k[o] + m) % 2 != 0) sign = -sign;
      const double p = gamma_p(static_cast<double>(j), mu[i] * t);
      acc += static_cast<long double>(sign) *
             std::exp(static_cast<long double>(lmag)) *
             static_cast<long double>(p);
    }
  }
  return std::clamp(static_cast<double>(acc), 0.0, 1.0);
}

// Same-sign series around the equal-rate point: with base = larger rate and
// q = 1 - small/base,
//   F(t) = (mu2/mu1)^k2 Sum_m C(k2+m-1, m) q^m P(k1+k2+m, mu1 t).
// Every term is positive, so no cancellation, and q < 1 guarantees
// convergence. Used when the rates are within a factor of two.
double sum_cdf_near_equal(int k1, double mu1, int k2, double mu2, double t) {
  if (mu2 > mu1) {
    std::swap(mu1, mu2);
    std::swap(k1, k2);
  }
  const double q = 1.0 - mu2 / mu1;
  const double x = mu1 * t;
  const double lx = std::log(x);
  double p = gamma_p(static_cast<double>(k1 + k2), x);
  double coef = 1.0;
  double acc = coef * p;
  for (int m = 1; m < 4000; ++m) {
    const int a = k1 + k2 + m - 1;  // current shape before increment
    // P(a+1, x) = P(a, x) - x^a e^-x / a!
    p -= std::exp(a * lx - x - std::lgamma(a + 1.0));
    p = std::max(p, 0.0);
    coef *= q * (k2 + m - 1.0) / m;
    const double term = coef * p;
    acc += term;
    if (term < 1e-18 * std::max(acc, 1e-300) && m > 4) break;
  }
  return std::clamp(std::pow(mu2 / mu1, k2) * acc, 0.0, 1.0);
}

}  // namespace

double erlang_cdf(int k, double rate, double t) {
  if (k < 1 || k > kMaxCount)
    throw std::invalid_argument("erlang_cdf: count out of range");
  if (!(rate > 0.0)) throw std::invalid_argument("erlang_cdf: rate <= 0");
  if (!(t >= 0.0)) throw std::invalid_argument("erlang_cdf: t < 0");
  return gamma_p(static_cast<double>(k), rate * t);
}

double two_erlang_sum_cdf(ErlangGroup a, ErlangGroup b, double t) {
  check_group(a, "two_erlang_sum_cdf");
  check_group(b, "two_erlang_sum_cdf");
  if (!(t >= 0.0)) throw std::invalid_argument("two_erlang_sum_cdf: t < 0");
  if (t == 0.0) return 0.0;
  const double rel_gap =
      std::abs(a.rate - b.rate) / std::max(a.rate, b.rate);
  if (rel_gap < 1e-6)
    return erlang_cdf(a.count + b.count, 0.5 * (a.rate + b.rate), t);
  if (rel_gap < 0.5)
    return sum_cdf_near_equal(a.count, a.rate, b.count, b.rate, t);
  return sum_cdf_partial_fractions(a.count, a.rate, b.count, b.rate, t);
}

double shifted_exp_product_cdf(const std::vector<ShiftedExpGroup>& groups,
                               double z, const ContourSpec& contour) {
  if (groups.empty() || groups.size() > 2)
    throw std::invalid_argument(
        "shifted_exp_product_cdf: need one or two groups");
  double log_support = 0.0;
  double shift_sum = 0.0;
  double scale = 1.0;
  std::vector<MellinFactor> factors;
  for (const auto& g : groups) {
    if (g.count < 1 || g.count > kMaxCount)
      throw std::invalid_argument("shifted_exp_product_cdf: count out of range");
    if (!(g.rate > 0.0))
      throw std::invalid_argument("shifted_exp_product_cdf: rate <= 0");
    if (!(g.alpha >= 0.0))
      throw std::invalid_argument("shifted_exp_product_cdf: alpha < 0");
    if (g.alpha > 0.0) log_support += g.count * std::log(g.alpha);
    shift_sum += g.count * g.alpha * g.rate;
    scale *= std::pow(g.rate, g.count);
    factors.push_back({g.alpha * g.rate, g.count});
  }
  if (!(z > 0.0))
    throw std::invalid_argument("shifted_exp_product_cdf: z <= 0");
  bool any_zero_alpha = false;
  for (const auto& g : groups) any_zero_alpha |= (g.alpha == 0.0);
  if (!any_zero_alpha && std::log(z) <= log_support) return 0.0;

  // The e^{shift_sum} normalization amplifies the quadrature error, so push
  // the inner tolerance down accordingly (floored near double precision).
  ContourSpec inner = contour;
  inner.abs_tol =
      std::max(1e-13, contour.abs_tol * std::exp(-std::min(shift_sum, 25.0)));
  const ContourResult r = mellin_barnes_cdf(factors, scale, z, inner);
  return std::clamp(std::exp(shift_sum) * r.value, 0.0, 1.0);
}

double sample_exponential(double rate, std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index) {
  if (!(rate > 0.0)) throw std::invalid_argument("sample_exponential: rate <= 0");
  return -std::log1p(-uniform01(seed, stream, index)) / rate;
}

double sample_erlang(int count, double rate, std::uint64_t seed,
                     std::uint64_t stream, std::uint64_t index0) {
  if (count < 1 || count > kMaxCount)
    throw std::invalid_argument("sample_erlang: count out of range");
  double acc = 0.0;
  for (int i = 0; i < count; ++i)
    acc += sample_exponential(rate, seed, stream, index0 + i);
  return acc;
}

}  // namespace harqcc
