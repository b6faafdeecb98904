#pragma once

#include <cmath>

#include "harqcc/distributions.hpp"

namespace harqcc {

// One Rayleigh-faded link. snr is the average SNR in linear units;
// fading_variance is the mean square channel magnitude.
struct LinkParams {
  double snr = 1.0;
  double fading_variance = 1.0;
};

inline double snr_from_db(double db) { return std::pow(10.0, db / 10.0); }
inline double snr_to_db(double snr) { return 10.0 * std::log10(snr); }

// Rate of the exponential distribution of the received SNR on a link.
inline double link_exp_rate(const LinkParams& link) {
  return 1.0 / (link.snr * link.fading_variance);
}

// Target rate R (bits/s/Hz) and the induced SNR threshold 2^R - 1.
struct RateThreshold {
  double rate = 1.0;
  double threshold = 1.0;
};

RateThreshold make_rate(double rate);

void check_link(const LinkParams& link, const char* who);

// Per-attempt decoding failure with independent decoding (no combining).
double arq_outage(const LinkParams& link, const RateThreshold& rt);

// Failure after k1 repeats of the same packet, accumulating SNR.
double rr_source_outage(const LinkParams& sd, int k1, const RateThreshold& rt);

// Failure after l source repeats plus k2 relay repeats, accumulating SNR
// over both phases.
double rr_combined_outage(const LinkParams& sd, const LinkParams& rd, int l,
                          int k2, const RateThreshold& rt);

// Failure after k1 transmissions accumulating mutual information.
double ir_source_outage(const LinkParams& sd, int k1, const RateThreshold& rt,
                        const ContourSpec& contour = {});

// Mutual-information accumulation across l source and k2 relay
// transmissions.
double ir_combined_outage(const LinkParams& sd, const LinkParams& rd, int l,
                          int k2, const RateThreshold& rt,
                          const ContourSpec& contour = {});

}  // namespace harqcc
