#include "harqcc/outage.hpp"

#include <stdexcept>

namespace harqcc {

RateThreshold make_rate(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("make_rate: rate must be > 0");
  return {rate, std::expm1(rate * M_LN2)};
}

void check_link(const LinkParams& link, const char* who) {
  if (!(link.snr > 0.0))
    throw std::invalid_argument(std::string(who) + ": snr must be > 0");
  if (!(link.fading_variance > 0.0))
    throw std::invalid_argument(std::string(who) +
                                ": fading_variance must be > 0");
}

double arq_outage(const LinkParams& link, const RateThreshold& rt) {
  check_link(link, "arq_outage");
  return -std::expm1(-rt.threshold * link_exp_rate(link));
}

double rr_source_outage(const LinkParams& sd, int k1, const RateThreshold& rt) {
  check_link(sd, "rr_source_outage");
  return erlang_cdf(k1, link_exp_rate(sd), rt.threshold);
}

double rr_combined_outage(const LinkParams& sd, const LinkParams& rd, int l,
                          int k2, const RateThreshold& rt) {
  check_link(sd, "rr_combined_outage");
  check_link(rd, "rr_combined_outage");
  return two_erlang_sum_cdf({l, link_exp_rate(sd)}, {k2, link_exp_rate(rd)},
                            rt.threshold);
}

double ir_source_outage(const LinkParams& sd, int k1, const RateThreshold& rt,
                        const ContourSpec& contour) {
  check_link(sd, "ir_source_outage");
  return shifted_exp_product_cdf({{k1, link_exp_rate(sd), 1.0}},
                                 rt.threshold + 1.0, contour);
}

double ir_combined_outage(const LinkParams& sd, const LinkParams& rd, int l,
                          int k2, const RateThreshold& rt,
                          const ContourSpec& contour) {
  check_link(sd, "ir_combined_outage");
  check_link(rd, "ir_combined_outage");
  return shifted_exp_product_cdf(
      {{l, link_exp_rate(sd), 1.0}, {k2, link_exp_rate(rd), 1.0}},
      rt.threshold + 1.0, contour);
}

}  // namespace harqcc
