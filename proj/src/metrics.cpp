#include "coharq/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "coharq/parallel.hpp"

namespace coharq {

MetricsEstimate summarize(std::span<const FrameResult> frames, std::span<const double> rates,
                          double alpha) {
    const std::size_t n = frames.size();
    if (n == 0) throw std::invalid_argument("summarize: no frames");
    const unsigned M = static_cast<unsigned>(rates.size());
    const double nf = static_cast<double>(n);
    // Unbiased variance from a sum and a sum of squares (or cross products).
    auto sample_cov = [&](double sum_xy, double sum_x, double sum_y) {
        return n > 1 ? (sum_xy - sum_x * sum_y / nf) / (nf - 1.0) : 0.0;
    };

    std::vector<std::size_t> outages(M, 0);
    std::uint64_t t_sum = 0;
    std::uint64_t t_sq = 0;
    double a_sum = 0.0;
    double a_sq = 0.0;
    double at_sum = 0.0;
    for (const FrameResult& f : frames) {
        double delivered = 0.0;
        for (unsigned s = 0; s < M; ++s) {
            if (f.outage(s))
                ++outages[s];
            else
                delivered += rates[s];
        }
        t_sum += f.t_used;
        t_sq += static_cast<std::uint64_t>(f.t_used) * f.t_used;
        a_sum += delivered;
        a_sq += delivered * delivered;
        at_sum += delivered * f.t_used;
    }

    MetricsEstimate est;
    est.frames = n;
    est.per_source_outage.resize(M);
    est.per_source_outage_se.resize(M);
    for (unsigned s = 0; s < M; ++s) {
        const double k = static_cast<double>(outages[s]);
        est.per_source_outage[s] = k / nf;
        est.per_source_outage_se[s] = std::sqrt(std::max(0.0, sample_cov(k, k, k)) / nf);
    }
    const double t_total = static_cast<double>(t_sum);
    est.expected_t_used = t_total / nf;
    const double var_t = std::max(0.0, sample_cov(static_cast<double>(t_sq), t_total, t_total));
    est.expected_t_used_se = std::sqrt(var_t / nf);

    const double denom = static_cast<double>(M) + alpha * est.expected_t_used;
    est.long_term_rates.resize(M);
    est.eta = 0.0;
    for (unsigned s = 0; s < M; ++s) {
        est.long_term_rates[s] = rates[s] / denom;
        est.eta += est.long_term_rates[s] * (1.0 - est.per_source_outage[s]);
    }

    const double mean_a = a_sum / nf;
    const double var_a = std::max(0.0, sample_cov(a_sq, a_sum, a_sum));
    const double cov_at = sample_cov(at_sum, a_sum, t_total);
    const double var_eta = var_a / (denom * denom) -
                           2.0 * mean_a * alpha * cov_at / (denom * denom * denom) +
                           mean_a * mean_a * alpha * alpha * var_t / (denom * denom * denom * denom);
    est.eta_se = std::sqrt(std::max(0.0, var_eta) / nf);
    return est;
}

std::vector<FrameResult> simulate_frames(const Cdi& cdi, std::span<const double> rates,
                                         const HarqConfig& cfg, std::size_t n_frames,
                                         std::uint64_t seed, unsigned workers) {
    if (n_frames < 1) throw std::invalid_argument("need at least one frame");
    cfg.validate();
    std::vector<FrameResult> out(n_frames);
    parallel_for(n_frames, workers, [&](std::size_t f) {
        out[f] = simulate_frame(cdi, rates, cfg, seed, f);
    });
    return out;
}

std::vector<FrameResult> simulate_frames(const RealizationBank& bank, std::span<const double> rates,
                                         const HarqConfig& cfg, unsigned workers) {
    if (bank.size() < 1) throw std::invalid_argument("need at least one frame");
    cfg.validate();
    std::vector<FrameResult> out(bank.size());
    parallel_for(bank.size(), workers, [&](std::size_t f) {
        StreamRng choices = StreamRng::for_frame(bank.seed(), f, StreamPurpose::Choices);
        out[f] = simulate_frame(bank[f], rates, cfg, choices);
    });
    return out;
}

MetricsEstimate estimate(const Cdi& cdi, std::span<const double> rates, const HarqConfig& cfg,
                         std::size_t n_frames, std::uint64_t seed, unsigned workers) {
    return summarize(simulate_frames(cdi, rates, cfg, n_frames, seed, workers), rates, cfg.alpha);
}

MetricsEstimate estimate(const RealizationBank& bank, std::span<const double> rates,
                         const HarqConfig& cfg, unsigned workers) {
    return summarize(simulate_frames(bank, rates, cfg, workers), rates, cfg.alpha);
}

std::vector<std::size_t> t_used_histogram(std::span<const FrameResult> frames, unsigned max_rounds) {
    std::vector<std::size_t> hist(max_rounds + 1, 0);
    for (const FrameResult& f : frames) ++hist.at(f.t_used);
    return hist;
}

std::vector<std::size_t> t_used_distribution(const Cdi& cdi, std::span<const double> rates,
                                             const HarqConfig& cfg, std::size_t n_frames,
                                             std::uint64_t seed, unsigned workers) {
    return t_used_histogram(simulate_frames(cdi, rates, cfg, n_frames, seed, workers), cfg.max_rounds);
}

}  // namespace coharq
