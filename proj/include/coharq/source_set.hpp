#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace coharq {

inline constexpr unsigned kMaxSources = 16;

/// Set of source messages, indexed 0..M-1, stored as a bit mask.
class SourceSet {
public:
    constexpr SourceSet() = default;
    constexpr explicit SourceSet(std::uint32_t mask) : mask_(mask) {}

    static constexpr SourceSet all(unsigned num_sources) {
        return SourceSet(num_sources >= 32 ? ~0u : (1u << num_sources) - 1u);
    }
    static constexpr SourceSet single(unsigned source) { return SourceSet(1u << source); }

    constexpr std::uint32_t mask() const { return mask_; }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr unsigned size() const { return static_cast<unsigned>(std::popcount(mask_)); }
    constexpr bool contains(unsigned source) const { return (mask_ >> source) & 1u; }
    constexpr bool intersects(SourceSet other) const { return (mask_ & other.mask_) != 0; }
    constexpr bool subset_of(SourceSet other) const { return (mask_ & ~other.mask_) == 0; }

    constexpr void insert(unsigned source) { mask_ |= 1u << source; }
    constexpr void erase(unsigned source) { mask_ &= ~(1u << source); }

    constexpr SourceSet operator&(SourceSet o) const { return SourceSet(mask_ & o.mask_); }
    constexpr SourceSet operator|(SourceSet o) const { return SourceSet(mask_ | o.mask_); }
    /// Set difference.
    constexpr SourceSet operator-(SourceSet o) const { return SourceSet(mask_ & ~o.mask_); }
    constexpr SourceSet& operator|=(SourceSet o) { mask_ |= o.mask_; return *this; }

    constexpr bool operator==(const SourceSet&) const = default;

    /// Calls fn(source) for each member in increasing order.
    template <typename Fn>
    constexpr void for_each(Fn&& fn) const {
        for (std::uint32_t m = mask_; m != 0; m &= m - 1)
            fn(static_cast<unsigned>(std::countr_zero(m)));
    }

    /// Calls fn(subset) for every subset, the empty set included.
    template <typename Fn>
    constexpr void for_each_subset(Fn&& fn) const {
        std::uint32_t sub = 0;
        do {
            fn(SourceSet(sub));
            sub = (sub - mask_) & mask_;
        } while (sub != 0);
    }

    /// "{s1,s3}" style, 1-based to match node naming.
    std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for_each([&](unsigned s) {
            if (!first) out += ',';
            out += 's' + std::to_string(s + 1);
            first = false;
        });
        return out + '}';
    }

private:
    std::uint32_t mask_ = 0;
};

}  // namespace coharq
