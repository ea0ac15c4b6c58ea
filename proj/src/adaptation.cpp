#include "coharq/adaptation.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <string>

#include "coharq/parallel.hpp"

namespace coharq {

McsFamily::McsFamily(std::vector<double> rates) : rates_(std::move(rates)) {
    if (rates_.empty()) throw std::invalid_argument("MCS family is empty");
    for (std::size_t i = 0; i < rates_.size(); ++i) {
        if (!(rates_[i] > 0.0)) throw std::invalid_argument("MCS rates must be > 0");
        if (i > 0 && !(rates_[i] > rates_[i - 1]))
            throw std::invalid_argument("MCS rates must be strictly increasing");
    }
}

McsFamily McsFamily::standard() { return McsFamily({0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5}); }

namespace {

std::vector<double> rates_of(const std::vector<std::size_t>& idx, const McsFamily& mcs) {
    std::vector<double> r(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) r[i] = mcs[idx[i]];
    return r;
}

// Tuple number -> per-source MCS indices, source 1 most significant, so
// increasing numbers are lexicographic order.
std::vector<std::size_t> decode_tuple(std::size_t number, unsigned M, std::size_t base) {
    std::vector<std::size_t> idx(M);
    for (unsigned s = M; s-- > 0;) {
        idx[s] = number % base;
        number /= base;
    }
    return idx;
}

}  // namespace

AdaptationResult exhaustive_search(const Cdi& cdi, const HarqConfig& cfg, const McsFamily& mcs,
                                   const AdaptationOptions& opts) {
    cfg.validate();
    const unsigned M = cdi.topology().num_sources();
    const double count = std::pow(static_cast<double>(mcs.size()), M);
    if (count > static_cast<double>(opts.max_tuples))
        throw SearchBudgetExceeded("exhaustive search over " + std::to_string(static_cast<long long>(count)) +
                                   " rate tuples exceeds the budget of " + std::to_string(opts.max_tuples) +
                                   "; use coordinate ascent instead");
    const auto tuples = static_cast<std::size_t>(count);
    if (tuples > opts.warn_tuples)
        std::clog << "warning: exhaustive search over " << tuples << " rate tuples\n";

    const RealizationBank bank(cdi, opts.seed, opts.frames);
    std::vector<MetricsEstimate> results(tuples);
    parallel_for(
        tuples, opts.workers,
        [&](std::size_t k) {
            const auto rates = rates_of(decode_tuple(k, M, mcs.size()), mcs);
            results[k] = estimate(bank, rates, cfg, 1);
        },
        1);

    std::size_t best = 0;
    for (std::size_t k = 1; k < tuples; ++k)
        if (results[k].eta > results[best].eta) best = k;
    return {{rates_of(decode_tuple(best, M, mcs.size()), mcs)}, std::move(results[best]), tuples};
}

AdaptationResult coordinate_ascent(const Cdi& cdi, const HarqConfig& cfg, const McsFamily& mcs,
                                   const AdaptationOptions& opts) {
    cfg.validate();
    const unsigned M = cdi.topology().num_sources();
    const RealizationBank bank(cdi, opts.seed, opts.frames);

    std::map<std::vector<std::size_t>, MetricsEstimate> seen;
    auto evaluate = [&](const std::vector<std::size_t>& idx) -> const MetricsEstimate& {
        auto it = seen.find(idx);
        if (it == seen.end())
            it = seen.emplace(idx, estimate(bank, rates_of(idx, mcs), cfg, opts.workers)).first;
        return it->second;
    };

    std::vector<std::size_t> current(M, 0);
    double current_eta = evaluate(current).eta;
    for (bool moved = true; moved;) {
        moved = false;
        for (unsigned s = 0; s < M; ++s) {
            std::size_t best_level = current[s];
            double best_eta = current_eta;
            std::vector<std::size_t> probe = current;
            for (std::size_t level = 0; level < mcs.size(); ++level) {
                if (level == current[s]) continue;
                probe[s] = level;
                const double eta = evaluate(probe).eta;
                // Strict improvement only, so the search terminates.
                if (eta > best_eta) {
                    best_eta = eta;
                    best_level = level;
                }
            }
            if (best_level != current[s]) {
                current[s] = best_level;
                current_eta = best_eta;
                moved = true;
            }
        }
    }
    return {{rates_of(current, mcs)}, evaluate(current), seen.size()};
}

}  // namespace coharq
