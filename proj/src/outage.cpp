#include "coharq/outage.hpp"

#include <stdexcept>
#include <string>

namespace coharq {
namespace {

SourceSet undecoded_at(const OutageContext& ctx, SourceSet known) {
    return ctx.realization.topology().all_sources() - known;
}

std::vector<HelpRecord> flatten(const std::optional<HelpRecord>& candidate,
                                const TransmissionHistory& history) {
    std::vector<HelpRecord> out;
    out.reserve(history.records.size() + 1);
    out.insert(out.end(), history.records.begin(), history.records.end());
    if (candidate) out.push_back(*candidate);
    return out;
}

unsigned helped_source_index(const HelpRecord& r) {
    if (!r.helped_source || !r.helped_source->is_source())
        throw std::invalid_argument("single-source protocol record from " + r.node.to_string() +
                                    " lacks a helped source");
    return r.helped_source->index - 1;
}

void require_unit_alpha(const OutageContext& ctx) {
    if (ctx.alpha != 1.0)
        throw std::invalid_argument("chase combining requires alpha = 1 (N1 = N2)");
}

// Mutual information of a helper transmission at the receiver, zero when the
// receiver is the helper.
double heard_mi(const HelpRecord& r, unsigned rx, const OutageContext& ctx) {
    const unsigned tx = ctx.realization.topology().dense(r.node);
    return tx == rx ? 0.0 : ctx.realization.mi(tx, rx);
}

double heard_gain(const HelpRecord& r, unsigned rx, const OutageContext& ctx) {
    const unsigned tx = ctx.realization.topology().dense(r.node);
    return tx == rx ? 0.0 : ctx.realization.gain(tx, rx);
}

}  // namespace

namespace detail {

bool ir_mu_individual(unsigned s, std::span<const HelpRecord> helpers, SourceSet known,
                      const OutageContext& ctx) {
    const SourceSet undecoded = undecoded_at(ctx, known);
    if (!undecoded.contains(s))
        throw std::invalid_argument("ir_mu_individual_outage: source s" + std::to_string(s + 1) +
                                    " already decoded by the receiver");
    const unsigned rx = ctx.realization.topology().dense(ctx.receiver);

    // For a fixed interference set I the helper term does not depend on U,
    // so the worst U is {s} plus every other candidate with R_u > I_u.
    const SourceSet others = undecoded - SourceSet::single(s);
    bool decodable_for_some_interference = false;
    others.for_each_subset([&](SourceSet interference) {
        if (decodable_for_some_interference) return;
        double help = 0.0;
        for (const HelpRecord& r : helpers)
            if (r.decoding_set.contains(s) && !r.decoding_set.intersects(interference))
                help += ctx.alpha * heard_mi(r, rx, ctx);

        double rate_sum = 0.0;
        double mi_sum = 0.0;
        (undecoded - interference).for_each([&](unsigned u) {
            const double rate = ctx.rates[u];
            const double mi = ctx.realization.mi(u, rx);
            if (u == s || rate > mi) {
                rate_sum += rate;
                mi_sum += mi;
            }
        });
        if (!(rate_sum > mi_sum + help)) decodable_for_some_interference = true;
    });
    return !decodable_for_some_interference;
}

bool ir_mu_common(SourceSet B, std::span<const HelpRecord> helpers, SourceSet known,
                  const OutageContext& ctx) {
    const SourceSet undecoded = undecoded_at(ctx, known);
    if (!B.subset_of(undecoded))
        throw std::invalid_argument("ir_mu_common_outage: B " + B.to_string() +
                                    " is not within the undecoded set " + undecoded.to_string());
    const unsigned rx = ctx.realization.topology().dense(ctx.receiver);
    const SourceSet interference = undecoded - B;

    bool outage = false;
    B.for_each_subset([&](SourceSet group) {
        if (outage || group.empty()) return;
        double rate_sum = 0.0;
        double mi_sum = 0.0;
        group.for_each([&](unsigned u) {
            rate_sum += ctx.rates[u];
            mi_sum += ctx.realization.mi(u, rx);
        });
        double help = 0.0;
        for (const HelpRecord& r : helpers)
            if (r.decoding_set.intersects(group) && !r.decoding_set.intersects(interference))
                help += ctx.alpha * heard_mi(r, rx, ctx);
        if (rate_sum > mi_sum + help) outage = true;
    });
    return outage;
}

bool ir_su_individual(unsigned s, std::span<const HelpRecord> helpers, const OutageContext& ctx) {
    const unsigned rx = ctx.realization.topology().dense(ctx.receiver);
    double help = 0.0;
    for (const HelpRecord& r : helpers)
        if (helped_source_index(r) == s) help += ctx.alpha * heard_mi(r, rx, ctx);
    return ctx.rates[s] > ctx.realization.mi(s, rx) + help;
}

double cc_mrc(unsigned s, std::span<const HelpRecord> helpers, const OutageContext& ctx) {
    require_unit_alpha(ctx);
    const unsigned rx = ctx.realization.topology().dense(ctx.receiver);
    double snr = ctx.realization.gain(s, rx);
    for (const HelpRecord& r : helpers)
        if (helped_source_index(r) == s) snr += heard_gain(r, rx, ctx);
    return snr;
}

bool cc_individual(unsigned s, std::span<const HelpRecord> helpers, const OutageContext& ctx) {
    return ctx.rates[s] > mutual_information(cc_mrc(s, helpers, ctx));
}

}  // namespace detail

bool ir_mu_common_outage(SourceSet B, const std::optional<HelpRecord>& candidate,
                         const TransmissionHistory& history, const OutageContext& ctx) {
    return detail::ir_mu_common(B, flatten(candidate, history), history.destination_set, ctx);
}

bool ir_mu_individual_outage(unsigned s, const std::optional<HelpRecord>& candidate,
                             const TransmissionHistory& history, const OutageContext& ctx) {
    return detail::ir_mu_individual(s, flatten(candidate, history), history.destination_set, ctx);
}

bool ir_su_individual_outage(unsigned s, const std::optional<HelpRecord>& candidate,
                             const TransmissionHistory& history, const OutageContext& ctx) {
    return detail::ir_su_individual(s, flatten(candidate, history), ctx);
}

bool ir_su_common_outage(SourceSet B, const std::optional<HelpRecord>& candidate,
                         const TransmissionHistory& history, const OutageContext& ctx) {
    const auto helpers = flatten(candidate, history);
    for (const HelpRecord& r : helpers) helped_source_index(r);
    bool outage = false;
    B.for_each([&](unsigned s) { outage = outage || detail::ir_su_individual(s, helpers, ctx); });
    return outage;
}

double cc_mrc_snr(unsigned s, const std::optional<HelpRecord>& candidate,
                  const TransmissionHistory& history, const OutageContext& ctx) {
    return detail::cc_mrc(s, flatten(candidate, history), ctx);
}

bool cc_individual_outage(unsigned s, const std::optional<HelpRecord>& candidate,
                          const TransmissionHistory& history, const OutageContext& ctx) {
    return detail::cc_individual(s, flatten(candidate, history), ctx);
}

bool cc_common_outage(SourceSet B, const std::optional<HelpRecord>& candidate,
                      const TransmissionHistory& history, const OutageContext& ctx) {
    require_unit_alpha(ctx);
    const auto helpers = flatten(candidate, history);
    for (const HelpRecord& r : helpers) helped_source_index(r);
    bool outage = false;
    B.for_each([&](unsigned s) { outage = outage || detail::cc_individual(s, helpers, ctx); });
    return outage;
}

}  // namespace coharq
