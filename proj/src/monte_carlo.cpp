#include "harqcc/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "harqcc/rng.hpp"
#include "harqcc/threads.hpp"

namespace harqcc {

namespace {

// Draw-index layout: each sample owns a stride of counter values so
// schemes with different draw counts stay aligned on the same gains.
constexpr std::uint64_t kIndexStride = 256;
constexpr std::uint64_t kStreamOutage = 0xA110;
constexpr std::uint64_t kStreamService = 0x5E21;
constexpr std::uint64_t kStreamBootstrap = 0xB007;
constexpr std::uint64_t kChunk = 1 << 16;

bool is_combined(OutageScheme s) {
  return s == OutageScheme::kRrCombined || s == OutageScheme::kIrCombined;
}

void check_outage_inputs(OutageScheme scheme, const OutageParams& p,
                         const SimPlan& plan) {
  check_link(p.first, "first");
  if (!(p.rate > 0.0) || !std::isfinite(p.rate))
    throw std::invalid_argument("rate must be positive");
  if (scheme != OutageScheme::kArq && p.first_count < 1)
    throw std::invalid_argument("copy count must be >= 1");
  if (is_combined(scheme)) {
    check_link(p.second, "second");
    if (p.second_count < 1)
      throw std::invalid_argument("second copy count must be >= 1");
  }
  const int draws =
      (scheme == OutageScheme::kArq ? 1 : p.first_count) +
      (is_combined(scheme) ? p.second_count : 0);
  if (draws > static_cast<int>(kIndexStride))
    throw std::invalid_argument("too many copies per sample");
  if (plan.samples < 10'000)
    throw std::invalid_argument("plan needs at least 1e4 samples");
}

// Instantaneous received snr on one attempt: exponential with mean
// snr * fading_variance.
double draw_gain(std::uint64_t seed, std::uint64_t index,
                 const LinkParams& link) {
  const double u = uniform01(seed, kStreamOutage, index);
  return -std::log1p(-u) * link.snr * link.fading_variance;
}

struct EventTotals {
  double sum = 0.0;      // summed gains (repeat combining)
  double mutual = 0.0;   // accumulated log(1 + gain)
};

EventTotals sample_totals(const OutageParams& p, int k1, int k2,
                          std::uint64_t seed, std::uint64_t sample) {
  const std::uint64_t base = sample * kIndexStride;
  EventTotals t;
  for (int j = 0; j < k1 + k2; ++j) {
    const double g =
        draw_gain(seed, base + j, j < k1 ? p.first : p.second);
    t.sum += g;
    t.mutual += std::log1p(g);
  }
  return t;
}

// Runs fn(sample_index) over [0, samples) in fixed chunks across
// workers; fn returns the failure count of its chunk.
template <typename ChunkFn>
std::uint64_t parallel_count(std::uint64_t samples, int threads,
                             ChunkFn chunk_fn) {
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  const int workers = static_cast<int>(
      std::min<std::uint64_t>(resolve_threads(threads), chunks));
  if (workers <= 1) {
    std::uint64_t total = 0;
    for (std::uint64_t c = 0; c < chunks; ++c)
      total += chunk_fn(c * kChunk, std::min(samples, (c + 1) * kChunk));
    return total;
  }
  std::atomic<std::uint64_t> next{0}, total{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::uint64_t c = next.fetch_add(1); c < chunks;
           c = next.fetch_add(1))
        total.fetch_add(
            chunk_fn(c * kChunk, std::min(samples, (c + 1) * kChunk)));
    });
  for (auto& t : pool) t.join();
  return total.load();
}

}  // namespace

OutageEstimate estimate_outage(OutageScheme scheme, const OutageParams& params,
                               const SimPlan& plan) {
  check_outage_inputs(scheme, params, plan);
  const int k1 = scheme == OutageScheme::kArq ? 1 : params.first_count;
  const int k2 = is_combined(scheme) ? params.second_count : 0;
  const bool repeat = scheme == OutageScheme::kArq ||
                      scheme == OutageScheme::kRrSource ||
                      scheme == OutageScheme::kRrCombined;
  const double sum_cut = std::expm1(params.rate * M_LN2);
  const double mutual_cut = params.rate * M_LN2;

  const std::uint64_t fails = parallel_count(
      plan.samples, plan.threads,
      [&](std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t n = 0;
        for (std::uint64_t s = lo; s < hi; ++s) {
          const EventTotals t = sample_totals(params, k1, k2, plan.seed, s);
          n += repeat ? (t.sum < sum_cut) : (t.mutual < mutual_cut);
        }
        return n;
      });

  OutageEstimate out;
  out.failures = fails;
  out.samples = plan.samples;
  out.value = static_cast<double>(fails) / static_cast<double>(plan.samples);
  out.std_error = std::sqrt(out.value * (1.0 - out.value) /
                            static_cast<double>(plan.samples));
  return out;
}

const char* outage_scheme_name(OutageScheme scheme) {
  switch (scheme) {
    case OutageScheme::kArq: return "arq";
    case OutageScheme::kRrSource: return "rr_src";
    case OutageScheme::kRrCombined: return "rr_comb";
    case OutageScheme::kIrSource: return "ir_src";
    case OutageScheme::kIrCombined: return "ir_comb";
  }
  return "?";
}

double closed_form_outage(OutageScheme scheme, const OutageParams& p) {
  const RateThreshold rt = make_rate(p.rate);
  switch (scheme) {
    case OutageScheme::kArq:
      return arq_outage(p.first, rt);
    case OutageScheme::kRrSource:
      return rr_source_outage(p.first, p.first_count, rt);
    case OutageScheme::kRrCombined:
      return rr_combined_outage(p.first, p.second, p.first_count,
                                p.second_count, rt);
    case OutageScheme::kIrSource:
      return ir_source_outage(p.first, p.first_count, rt);
    case OutageScheme::kIrCombined:
      return ir_combined_outage(p.first, p.second, p.first_count,
                                p.second_count, rt);
  }
  throw std::invalid_argument("unknown outage scheme");
}

SharedDominance ir_rr_shared_sample(const OutageParams& params,
                                    const SimPlan& plan) {
  check_outage_inputs(OutageScheme::kRrCombined, params, plan);
  const double sum_cut = std::expm1(params.rate * M_LN2);
  const double mutual_cut = params.rate * M_LN2;

  std::atomic<std::uint64_t> rr{0}, ir{0}, ir_only{0};
  parallel_count(plan.samples, plan.threads,
                 [&](std::uint64_t lo, std::uint64_t hi) -> std::uint64_t {
                   std::uint64_t c_rr = 0, c_ir = 0, c_only = 0;
                   for (std::uint64_t s = lo; s < hi; ++s) {
                     const EventTotals t = sample_totals(
                         params, params.first_count, params.second_count,
                         plan.seed, s);
                     const bool rr_fail = t.sum < sum_cut;
                     const bool ir_fail = t.mutual < mutual_cut;
                     c_rr += rr_fail;
                     c_ir += ir_fail;
                     c_only += ir_fail && !rr_fail;
                   }
                   rr.fetch_add(c_rr);
                   ir.fetch_add(c_ir);
                   ir_only.fetch_add(c_only);
                   return 0;
                 });
  return SharedDominance{rr.load(), ir.load(), ir_only.load(), plan.samples};
}

namespace {

struct ModeStep {
  double cum = 0.0;
  int to = 0;
  int bits = 0;
};

std::vector<std::vector<ModeStep>> walk_table(const ModeGraph& g) {
  if (g.mode_count < 1) throw std::invalid_argument("graph has no modes");
  std::vector<std::vector<ModeStep>> table(g.mode_count);
  std::vector<double> sums(g.mode_count, 0.0);
  for (const auto& tr : g.transitions) {
    if (tr.from < 0 || tr.from >= g.mode_count || tr.to < 0 ||
        tr.to >= g.mode_count)
      throw std::invalid_argument("transition endpoint out of range");
    if (!(tr.prob >= 0.0) || tr.prob > 1.0 || (tr.bits != 0 && tr.bits != 1))
      throw std::invalid_argument("transition weight out of range");
    sums[tr.from] += tr.prob;
    table[tr.from].push_back({sums[tr.from], tr.to, tr.bits});
  }
  for (int m = 0; m < g.mode_count; ++m)
    if (std::abs(sums[m] - 1.0) > 1e-9)
      throw std::invalid_argument(
          "outgoing probabilities of a mode do not sum to one");
  return table;
}

double kahan_sum(const std::vector<double>& xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace

ServiceEstimate simulate_service_process(const ModeGraph& g,
                                         const QosSpec& qos,
                                         const SimPlan& plan) {
  if (!(qos.theta > 0.0) || !(qos.rate > 0.0))
    throw std::invalid_argument("qos parameters must be positive");
  if (plan.block_length < 100)
    throw std::invalid_argument("block length must be >= 100");
  if (plan.blocks < 1000) throw std::invalid_argument("need >= 1000 blocks");
  const auto table = walk_table(g);
  const int n = plan.block_length;
  const int blocks = plan.blocks;

  // z_b = -theta * S_b, with S_b the bits delivered in block b times R.
  std::vector<double> z(blocks);
  auto run_block = [&](int b) {
    const std::uint64_t base = static_cast<std::uint64_t>(b) * n;
    int mode = 0;
    long bits = 0;
    for (int t = 0; t < n; ++t) {
      const double u = uniform01(plan.seed, kStreamService, base + t);
      const auto& steps = table[mode];
      size_t pick = steps.size() - 1;
      for (size_t i = 0; i + 1 < steps.size(); ++i)
        if (u < steps[i].cum) {
          pick = i;
          break;
        }
      bits += steps[pick].bits;
      mode = steps[pick].to;
    }
    z[b] = -qos.theta * qos.rate * static_cast<double>(bits);
  };

  const int workers = std::min(resolve_threads(plan.threads), blocks);
  if (workers <= 1) {
    for (int b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int b = next.fetch_add(1); b < blocks; b = next.fetch_add(1))
          run_block(b);
      });
    for (auto& t : pool) t.join();
  }

  const double m = *std::max_element(z.begin(), z.end());
  std::vector<double> w(blocks);
  for (int b = 0; b < blocks; ++b) w[b] = std::exp(z[b] - m);
  const double denom = qos.theta * n;
  auto ec_of_mean = [&](double mean) {
    return std::clamp(-(m + std::log(mean)) / denom, 0.0, qos.rate);
  };
  ServiceEstimate out;
  out.value = ec_of_mean(kahan_sum(w) / blocks);
  out.degenerate =
      *std::min_element(z.begin(), z.end()) == m;

  // Bootstrap over the block totals.
  constexpr int kResamples = 200;
  std::vector<double> resampled(kResamples);
  for (int r = 0; r < kResamples; ++r) {
    double s = 0.0, c = 0.0;
    for (int i = 0; i < blocks; ++i) {
      const double u = uniform01(plan.seed, kStreamBootstrap,
                                 static_cast<std::uint64_t>(r) * blocks + i);
      const double x =
          w[static_cast<size_t>(std::min<double>(blocks - 1.0, u * blocks))];
      const double y = x - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    resampled[r] = ec_of_mean(s / blocks);
  }
  double mean = kahan_sum(resampled) / kResamples;
  double var = 0.0;
  for (double x : resampled) var += (x - mean) * (x - mean);
  var /= kResamples - 1;
  out.ci_halfwidth = 1.96 * std::sqrt(var);
  return out;
}

}  // namespace harqcc
