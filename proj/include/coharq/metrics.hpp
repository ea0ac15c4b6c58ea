#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "coharq/channel.hpp"
#include "coharq/protocol.hpp"

namespace coharq {

/// Monte-Carlo estimate of the long-term figures of merit for one rate
/// tuple. eta and long_term_rates are composed from the other fields so the
/// identities
///   long_term_rates[s] = R_s / (M + alpha * expected_t_used)
///   eta = sum_s long_term_rates[s] * (1 - per_source_outage[s])
/// hold exactly on every instance.
struct MetricsEstimate {
    std::vector<double> per_source_outage;
    std::vector<double> per_source_outage_se;
    double expected_t_used = 0.0;
    double expected_t_used_se = 0.0;
    std::vector<double> long_term_rates;
    double eta = 0.0;
    double eta_se = 0.0;
    std::size_t frames = 0;
};

/// Reduces per-frame outcomes (in frame order) into an estimate. Standard
/// errors come from sample variances; eta's from first-order propagation
/// through the ratio, including the covariance between the delivered rate
/// and the number of rounds.
MetricsEstimate summarize(std::span<const FrameResult> frames, std::span<const double> rates,
                          double alpha);

/// Outcomes of frames [0, n_frames) under `seed`, indexed by frame.
std::vector<FrameResult> simulate_frames(const Cdi& cdi, std::span<const double> rates,
                                         const HarqConfig& cfg, std::size_t n_frames,
                                         std::uint64_t seed, unsigned workers = 1);

/// Same, on pre-drawn realizations. Gives results identical to the Cdi form
/// with seed == bank.seed().
std::vector<FrameResult> simulate_frames(const RealizationBank& bank, std::span<const double> rates,
                                         const HarqConfig& cfg, unsigned workers = 1);

MetricsEstimate estimate(const Cdi& cdi, std::span<const double> rates, const HarqConfig& cfg,
                         std::size_t n_frames, std::uint64_t seed, unsigned workers = 1);

MetricsEstimate estimate(const RealizationBank& bank, std::span<const double> rates,
                         const HarqConfig& cfg, unsigned workers = 1);

/// Histogram of retransmission rounds used; entry t counts frames with t_used = t.
std::vector<std::size_t> t_used_histogram(std::span<const FrameResult> frames, unsigned max_rounds);

std::vector<std::size_t> t_used_distribution(const Cdi& cdi, std::span<const double> rates,
                                             const HarqConfig& cfg, std::size_t n_frames,
                                             std::uint64_t seed, unsigned workers = 1);

}  // namespace coharq
