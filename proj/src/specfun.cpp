#include "harqcc/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace harqcc {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = 3.141592653589793238462643383279502884;

// Lanczos, g = 7, 9 terms; ~1e-14 relative over the right half plane.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

// log(sin(pi*z)) without overflow for large |Im z|.
cplx log_sin_pi(cplx z) {
  const cplx w = kPi * z;
  if (std::abs(w.imag()) < 1.0) return std::log(std::sin(w));
  const cplx i(0.0, 1.0);
  if (w.imag() > 0.0)
    return std::log(i * 0.5) - i * w + std::log(1.0 - std::exp(2.0 * i * w));
  return std::log(-i * 0.5) + i * w + std::log(1.0 - std::exp(-2.0 * i * w));
}

cplx log_gamma_right(cplx z) {
  // requires Re z >= 0.5
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline cplx pow_int(cplx base, int k) {
  cplx r(1.0, 0.0);
  while (k-- > 0) r *= base;
  return r;
}

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
  if (z.real() >= 0.5) return log_gamma_right(z);
  // Reflection; assumes z is not a nonpositive integer.
  return std::log(cplx(kPi)) - log_sin_pi(z) - log_gamma_right(1.0 - z);
}

std::complex<double> gamma_fn(std::complex<double> z) {
  return std::exp(log_gamma(z));
}

double gamma_p(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0))
    throw std::invalid_argument("gamma_p: need a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // series for P(a,x)
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return std::min(1.0, sum * std::exp(a * std::log(x) - x - lg));
  }
  // Modified Lentz continued fraction for Q(a,x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 5e-17) break;
  }
  const double q = std::exp(a * std::log(x) - x - lg) * h;
  return std::max(0.0, 1.0 - q);
}

double lower_incomplete_gamma(double a, double x) {
  return gamma_p(a, x) * std::tgamma(a);
}

std::complex<double> lower_incomplete_gamma(std::complex<double> s, double x) {
  if (!(x >= 0.0))
    throw std::invalid_argument("lower_incomplete_gamma: need x >= 0");
  if (x == 0.0) return {0.0, 0.0};
  // gamma(s,x) = x^s e^-x sum_n x^n / (s (s+1) ... (s+n))
  cplx cur = 1.0 / s, sum = cur;
  for (int n = 1; n < 100000; ++n) {
    cur *= x / (s + static_cast<double>(n));
    sum += cur;
    if (std::abs(cur) < std::abs(sum) * 1e-18 && n > x) break;
  }
  return sum * std::exp(s * std::log(x) - x);
}

namespace {

// Legendre continued fraction for Gamma(s,x); good for x >~ |s|.
cplx upper_gamma_cf(cplx s, double x, std::size_t max_iter = 200000) {
  const double tiny = 1e-300;
  cplx b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (std::size_t i = 1; i <= max_iter; ++i) {
    const cplx an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 5e-17)
      return std::exp(s * std::log(x) - x) * h;
  }
  throw AccuracyError("upper incomplete gamma continued fraction stalled",
                      std::abs(h), 5e-17);
}

}  // namespace

std::complex<double> upper_incomplete_gamma(std::complex<double> s, double x) {
  if (!(x >= 0.0))
    throw std::invalid_argument("upper_incomplete_gamma: need x >= 0");
  if (x == 0.0) return gamma_fn(s);  // Re s > 0 territory
  if (x >= std::abs(s) + 1.0) return upper_gamma_cf(s, x);

  // Series region. Lift s away from the poles of Gamma(s) on the nonpositive
  // axis, evaluate there, then recurse back down with
  //   Gamma(s,x) = (Gamma(s+1,x) - x^s e^-x) / s.
  int m = 0;
  if (s.real() < 0.5) m = static_cast<int>(std::ceil(0.5 - s.real()));
  for (int j = 0; j < m; ++j) {
    if (std::abs(s + static_cast<double>(j)) < 1e-4)
      return upper_gamma_cf(s, x, 2000000);  // rare; slow but pole-free
  }
  const cplx sm = s + static_cast<double>(m);
  cplx val = gamma_fn(sm) - lower_incomplete_gamma(sm, x);
  for (int j = m - 1; j >= 0; --j) {
    const cplx sj = s + static_cast<double>(j);
    val = (val - std::exp(sj * std::log(x) - x)) / sj;
  }
  return val;
}

namespace {

struct ContourIntegrand {
  const std::vector<MellinFactor>& factors;
  double log_sz;  // log(scale * z)
  double c;       // abscissa
  bool all_shifted;

  cplx operator()(double tau) const {
    const cplx h(c, tau);
    const cplx s = h + 1.0;
    const cplx g_complete = std::exp(log_gamma(s));
    cplx full(1.0, 0.0), lower_prod(1.0, 0.0);
    for (const auto& f : factors) {
      const cplx gl = f.shift > 0.0 ? lower_incomplete_gamma(s, f.shift)
                                    : cplx(0.0, 0.0);
      full *= pow_int(g_complete - gl, f.multiplicity);
      if (all_shifted) lower_prod *= pow_int(-gl, f.multiplicity);
    }
    const cplx rest = all_shifted ? full - lower_prod : full;
    return rest * (-1.0 / h) * std::exp(-h * log_sz);
  }
};

}  // namespace

ContourResult mellin_barnes_cdf(const std::vector<MellinFactor>& factors,
                                double scale, double z,
                                const ContourSpec& contour) {
  if (factors.empty())
    throw std::invalid_argument("mellin_barnes_cdf: no factors");
  for (const auto& f : factors) {
    if (!(f.shift >= 0.0) || f.multiplicity < 1)
      throw std::invalid_argument("mellin_barnes_cdf: bad factor");
  }
  if (!(scale > 0.0) || !(z > 0.0))
    throw std::invalid_argument("mellin_barnes_cdf: need scale > 0, z > 0");
  const double c = contour.abscissa;
  if (!(c > -1.0) || !(c < 0.0))
    throw std::invalid_argument(
        "mellin_barnes_cdf: abscissa must lie in (-1, 0)");

  bool all_shifted = true;
  int total_k = 0;
  double log_support = -std::log(scale);
  for (const auto& f : factors) {
    total_k += f.multiplicity;
    if (f.shift == 0.0)
      all_shifted = false;
    else
      log_support += f.multiplicity * std::log(f.shift);
  }

  // Below the smallest attainable product value the CDF is exactly zero.
  if (all_shifted && std::log(z) <= log_support) return {0.0, 0.0, 0.0, 0};

  // Closed-form part: the all-lower-gamma term of the integrand corresponds
  // to a bounded product variable whose full mass lies below z here, so its
  // contour integral is just (+/-) the product of the factor masses.
  double direct = 0.0;
  if (all_shifted) {
    direct = (total_k % 2 == 0) ? 1.0 : -1.0;
    for (const auto& f : factors)
      direct *= std::pow(-std::expm1(-f.shift), f.multiplicity);
  }

  const ContourIntegrand fn{factors, std::log(scale) + std::log(z), c,
                            all_shifted};

  // Grow the truncation until the integrand has died off.
  const double node_cut = contour.abs_tol * 1e-2;
  double t_max = 8.0;
  std::size_t nodes = 0;
  for (;;) {
    nodes += 2;
    const double m =
        std::max(std::abs(fn(t_max)), std::abs(fn(-t_max)));
    if (m < node_cut) break;
    t_max *= 1.5;
    if (t_max > 800.0)
      throw AccuracyError("mellin_barnes_cdf: integrand tail will not decay",
                          m, node_cut);
  }

  // Trapezoid with interval halving, Simpson extrapolation.
  std::size_t n = 64;
  double h_step = 2.0 * t_max / static_cast<double>(n);
  cplx trap = 0.5 * (fn(-t_max) + fn(t_max));
  for (std::size_t i = 1; i < n; ++i)
    trap += fn(-t_max + h_step * static_cast<double>(i));
  trap *= h_step;
  nodes += n + 1;

  cplx simpson_prev(0.0, 0.0), simpson_cur(0.0, 0.0);
  double change = std::numeric_limits<double>::infinity();
  double change_prev = std::numeric_limits<double>::infinity();
  int level = 0;
  for (;;) {
    ++level;
    cplx mid(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      mid += fn(-t_max + h_step * (static_cast<double>(i) + 0.5));
    nodes += n;
    const cplx trap_fine = 0.5 * trap + 0.5 * h_step * mid;
    simpson_prev = simpson_cur;
    simpson_cur = (4.0 * trap_fine - trap) / 3.0;
    trap = trap_fine;
    n *= 2;
    h_step *= 0.5;
    change_prev = change;
    change = std::abs(simpson_cur - simpson_prev);
    const double goal = std::max(contour.abs_tol * 0.2, 1e-15);
    if (level >= 4 && change < goal && change_prev < 50.0 * goal) break;
    if (nodes > contour.max_nodes)
      throw AccuracyError("mellin_barnes_cdf: node budget exhausted", change,
                          contour.abs_tol);
  }

  const double two_pi = 2.0 * kPi;
  ContourResult out;
  out.value = simpson_cur.real() / two_pi + direct;
  out.im_residual = std::abs(simpson_cur.imag()) / two_pi;
  out.abs_error = change / two_pi + node_cut;
  out.nodes = nodes;
  if (out.abs_error > contour.abs_tol)
    throw AccuracyError("mellin_barnes_cdf: requested tolerance not reached",
                        out.abs_error, contour.abs_tol);
  return out;
}

}  // namespace harqcc
