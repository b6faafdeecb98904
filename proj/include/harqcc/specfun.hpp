#pragma once

#include <complex>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace harqcc {

namespace detail {
inline std::string error_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}
}  // namespace detail

// Thrown when an iterative scheme cannot reach the requested accuracy.
// Carries the best error estimate achieved so callers can decide what to do.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved, double requested)
      : std::runtime_error(what + " (achieved " + detail::error_g(achieved) +
                           ", requested " + detail::error_g(requested) + ")"),
        achieved_(achieved),
        requested_(requested) {}
  double achieved() const noexcept { return achieved_; }
  double requested() const noexcept { return requested_; }

 private:
  double achieved_;
  double requested_;
};

// log Gamma for complex argument (Lanczos g=7, reflection for Re z < 0.5).
// The imaginary part is not reduced to a principal branch; exp() of the
// result is what callers rely on.
std::complex<double> log_gamma(std::complex<double> z);
std::complex<double> gamma_fn(std::complex<double> z);

// Regularized lower incomplete gamma P(a,x) in [0,1]; a > 0, x >= 0.
double gamma_p(double a, double x);

// Unnormalized lower incomplete gamma, real arguments.
double lower_incomplete_gamma(double a, double x);

// Lower incomplete gamma by series for complex s (Re s > 0), real x >= 0.
std::complex<double> lower_incomplete_gamma(std::complex<double> s, double x);

// Upper incomplete gamma for complex s, real x >= 0, analytically continued
// in s. Series/continued-fraction split at x = |s|+1.
std::complex<double> upper_incomplete_gamma(std::complex<double> s, double x);

struct MellinFactor {
  double shift = 0.0;    // >= 0
  int multiplicity = 1;  // >= 1
};

struct ContourSpec {
  double abscissa = -0.5;  // Re h, strictly inside (-1, 0)
  double abs_tol = 1e-8;
  std::size_t max_nodes = 4'000'000;
};

struct ContourResult {
  double value = 0.0;
  double abs_error = 0.0;    // estimated
  double im_residual = 0.0;  // |Im| of the quadrature sum; should be ~0
  std::size_t nodes = 0;
};

// Inverse-Mellin CDF integral
//   (1/2*pi*i) Int_{c-iT}^{c+iT}  Prod_i Gamma(1+h, shift_i)^{k_i}
//                                 * (-1/h) * (scale*z)^{-h}  dh,  T -> inf,
// evaluated on the vertical line Re h = abscissa by adaptive
// trapezoid/Simpson refinement.  The slowly decaying part of the integrand
// (the product of lower incomplete gammas that appears once every factor's
// complete-gamma term is split off) integrates in closed form, so quadrature
// only ever sees a remainder that dies off superexponentially in |Im h|.
// Returns 0 for z at or below Prod shift_i^{k_i} / scale, where the
// underlying distribution has no mass.
ContourResult mellin_barnes_cdf(const std::vector<MellinFactor>& factors,
                                double scale, double z,
                                const ContourSpec& contour = {});

}  // namespace harqcc
