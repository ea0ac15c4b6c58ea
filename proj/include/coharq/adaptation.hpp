#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "coharq/metrics.hpp"

namespace coharq {

/// Discrete set of allowed initial rates, strictly increasing, in b.c.u.
class McsFamily {
public:
    explicit McsFamily(std::vector<double> rates);

    /// {0.5, 1, ..., 3.5}.
    static McsFamily standard();

    const std::vector<double>& rates() const { return rates_; }
    std::size_t size() const { return rates_.size(); }
    double operator[](std::size_t i) const { return rates_[i]; }

private:
    std::vector<double> rates_;
};

struct RateAllocation {
    std::vector<double> rates;
    bool operator==(const RateAllocation&) const = default;
};

struct AdaptationResult {
    RateAllocation allocation;
    MetricsEstimate metrics;
    /// Distinct rate tuples evaluated.
    std::size_t evaluations = 0;
};

struct AdaptationOptions {
    /// Frames per tuple evaluation; every tuple sees the same frames.
    std::size_t frames = 10'000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    /// Exhaustive search refuses more tuples than this.
    std::size_t max_tuples = 20'000;
    /// Above this tuple count exhaustive search still runs but warns.
    std::size_t warn_tuples = 10'000;
};

class SearchBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluates every M-tuple of the family on common random numbers and keeps
/// the best eta; ties go to the lexicographically smallest tuple.
AdaptationResult exhaustive_search(const Cdi& cdi, const HarqConfig& cfg, const McsFamily& mcs,
                                   const AdaptationOptions& opts);

/// Local search: start from the lowest rate everywhere, then sweep the
/// sources, moving each to its best rate with the others fixed, until a
/// sweep changes nothing. Uses the same common random numbers as
/// exhaustive_search, so its eta never exceeds the exhaustive optimum.
AdaptationResult coordinate_ascent(const Cdi& cdi, const HarqConfig& cfg, const McsFamily& mcs,
                                   const AdaptationOptions& opts);

}  // namespace coharq
