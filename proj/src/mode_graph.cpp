#include "harqcc/mode_graph.hpp"

#include <cmath>
#include <stdexcept>

namespace harqcc {

namespace {

void check_prob(double q, const char* who) {
  if (!(q >= 0.0) || !(q <= 1.0))
    throw std::invalid_argument(std::string(who) +
                                ": probability outside [0, 1]");
}

}  // namespace

ModeGraph build_strategy1(const OutageTablesI& t) {
  check_prob(t.q_sd, "build_strategy1");
  check_prob(t.q_sr, "build_strategy1");
  check_prob(t.q_rd, "build_strategy1");
  ModeGraph g;
  g.mode_count = 2;
  // source keeps the packet: both destination and relay missed it
  g.transitions.push_back({0, 0, t.q_sd * t.q_sr, 0});
  // destination decoded; fresh packet next slot
  g.transitions.push_back({0, 0, 1.0 - t.q_sd, 1});
  // relay decoded but destination missed: relay takes over
  g.transitions.push_back({0, 1, t.q_sd * (1.0 - t.q_sr), 0});
  // relay retransmission fails / succeeds
  g.transitions.push_back({1, 1, t.q_rd, 0});
  g.transitions.push_back({1, 0, 1.0 - t.q_rd, 1});
  return g;
}

ModeGraph build_strategy2(const OutageTablesII& t) {
  const int m = t.source_budget, n = t.relay_budget;
  if (m < 1 || n < 1)
    throw std::invalid_argument("build_strategy2: budgets must be >= 1");
  if (static_cast<int>(t.q_sd.size()) != m ||
      static_cast<int>(t.q_sr.size()) != m ||
      static_cast<int>(t.q_srd.size()) != m * n)
    throw std::invalid_argument("build_strategy2: table sizes disagree with budgets");
  for (double q : t.q_sd) check_prob(q, "build_strategy2");
  for (double q : t.q_sr) check_prob(q, "build_strategy2");
  for (double q : t.q_srd) check_prob(q, "build_strategy2");

  const auto source_mode = [n](int l) { return (l - 1) * (n + 1); };
  ModeGraph g;
  g.mode_count = m * (n + 1);
  for (int l = 1; l <= m; ++l) {
    const int s = source_mode(l);
    const double qsd = t.q_sd[l - 1], qsr = t.q_sr[l - 1];
    // both fail: next source copy, or a drop when the budget is spent
    g.transitions.push_back(
        {s, l < m ? source_mode(l + 1) : 0, qsd * qsr, 0});
    // destination decoded
    g.transitions.push_back({s, 0, 1.0 - qsd, 1});
    // relay-only decode: hand over to the relay phase of round l
    g.transitions.push_back({s, s + 1, qsd * (1.0 - qsr), 0});
    for (int i = 1; i <= n; ++i) {
      const int r = s + i;
      const double q = t.q_srd[(l - 1) * n + (i - 1)];
      // relay copy missed: next relay copy, or a drop on the last one
      g.transitions.push_back({r, i < n ? r + 1 : 0, q, 0});
      g.transitions.push_back({r, 0, 1.0 - q, 1});
    }
  }
  return g;
}

OutageTablesI make_tables_strategy1(const LinkParams& sd, const LinkParams& sr,
                                    const LinkParams& rd,
                                    const RateThreshold& rt) {
  return {arq_outage(sd, rt), arq_outage(sr, rt), arq_outage(rd, rt)};
}

OutageTablesII make_tables_strategy2(const LinkParams& sd,
                                     const LinkParams& sr,
                                     const LinkParams& rd, int source_budget,
                                     int relay_budget, Combining combining,
                                     const RateThreshold& rt,
                                     const ContourSpec& contour) {
  if (source_budget < 1 || relay_budget < 1)
    throw std::invalid_argument("make_tables_strategy2: budgets must be >= 1");
  OutageTablesII t;
  t.source_budget = source_budget;
  t.relay_budget = relay_budget;
  const bool rr = combining == Combining::kRepeat;
  for (int l = 1; l <= source_budget; ++l) {
    t.q_sd.push_back(rr ? rr_source_outage(sd, l, rt)
                        : ir_source_outage(sd, l, rt, contour));
    t.q_sr.push_back(rr ? rr_source_outage(sr, l, rt)
                        : ir_source_outage(sr, l, rt, contour));
    for (int i = 1; i <= relay_budget; ++i)
      t.q_srd.push_back(rr ? rr_combined_outage(sd, rd, l, i, rt)
                           : ir_combined_outage(sd, rd, l, i, rt, contour));
  }
  return t;
}

CompanionMatrix alpha_matrix(const ModeGraph& g, double theta, double rate) {
  if (g.mode_count < 1)
    throw std::invalid_argument("alpha_matrix: empty graph");
  if (!(theta >= 0.0))
    throw std::invalid_argument("alpha_matrix: theta must be >= 0");
  if (!(rate > 0.0))
    throw std::invalid_argument("alpha_matrix: rate must be > 0");
  CompanionMatrix a;
  a.size = g.mode_count;
  a.a.assign(static_cast<std::size_t>(a.size) * a.size, 0.0);
  for (const auto& tr : g.transitions) {
    if (tr.from < 0 || tr.from >= a.size || tr.to < 0 || tr.to >= a.size)
      throw std::invalid_argument("alpha_matrix: transition out of range");
    a.at(tr.to, tr.from) +=
        tr.prob * std::exp(-theta * static_cast<double>(tr.bits) * rate);
  }
  return a;
}

}  // namespace harqcc
