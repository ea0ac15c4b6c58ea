#pragma once

#include <cstdint>
#include <limits>

namespace coharq {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent child seed from (parent, key). Used to build the
/// stream tree master seed -> sweep point -> frame -> purpose.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) {
    return mix64(mix64(parent + 0x9e3779b97f4a7c15ULL) ^ (key * 0xd1342543de82ef95ULL + 1));
}

/// Purpose tags for per-frame sub-streams.
enum class StreamPurpose : std::uint64_t { Channel = 1, Choices = 2 };

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator so it plugs
/// into the <random> distributions. Each frame gets its own instance, so
/// results never depend on evaluation order.
class StreamRng {
public:
    using result_type = std::uint64_t;

    constexpr explicit StreamRng(std::uint64_t seed) : state_(seed) {}

    static constexpr StreamRng for_frame(std::uint64_t seed, std::uint64_t frame,
                                         StreamPurpose purpose) {
        return StreamRng(derive_seed(derive_seed(seed, frame), static_cast<std::uint64_t>(purpose)));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

}  // namespace coharq
