#pragma once

#include <optional>
#include <span>
#include <vector>

#include "coharq/channel.hpp"
#include "coharq/source_set.hpp"
#include "coharq/topology.hpp"

namespace coharq {

/// One scheduled transmission of the retransmission phase: who sent, what
/// that node had decoded when it was selected, and for single-source
/// protocols which source it helped.
struct HelpRecord {
    NodeId node;
    SourceSet decoding_set;
    std::optional<NodeId> helped_source;
};

/// Rounds 1..t-1 as seen by a receiver, plus that receiver's decoding set
/// after round t-1. For the destination this is S_{d,t-1}; other listening
/// nodes use their own set.
struct TransmissionHistory {
    std::vector<HelpRecord> records;
    SourceSet destination_set;
};

/// Everything an outage test needs besides the history. `rates` holds R_s
/// for s1..sM in bits per channel use; `alpha` is N2/N1.
struct OutageContext {
    std::span<const double> rates;
    const ChannelRealization& realization;
    double alpha;
    NodeId receiver = NodeId::destination();
};

// All evaluators follow the strict convention: outage iff rate > accumulated
// mutual information, so equality decodes. A helper whose node is the
// receiver itself contributes nothing. Sources are addressed by 0-based
// index in the SourceSet sense; `s` parameters below are 0-based as well.

/// Multi-user IR: common outage of the set B, interference I = undecoded \ B.
bool ir_mu_common_outage(SourceSet B, const std::optional<HelpRecord>& candidate,
                         const TransmissionHistory& history, const OutageContext& ctx);

/// Multi-user IR: individual outage of source s (intersection over every
/// interference set of the union over rate subsets containing s).
bool ir_mu_individual_outage(unsigned s, const std::optional<HelpRecord>& candidate,
                             const TransmissionHistory& history, const OutageContext& ctx);

bool ir_su_individual_outage(unsigned s, const std::optional<HelpRecord>& candidate,
                             const TransmissionHistory& history, const OutageContext& ctx);
bool ir_su_common_outage(SourceSet B, const std::optional<HelpRecord>& candidate,
                         const TransmissionHistory& history, const OutageContext& ctx);

/// MRC-combined SNR of source s: direct gain plus the gains of every
/// transmission dedicated to s that the receiver heard.
double cc_mrc_snr(unsigned s, const std::optional<HelpRecord>& candidate,
                  const TransmissionHistory& history, const OutageContext& ctx);
bool cc_individual_outage(unsigned s, const std::optional<HelpRecord>& candidate,
                          const TransmissionHistory& history, const OutageContext& ctx);
bool cc_common_outage(SourceSet B, const std::optional<HelpRecord>& candidate,
                      const TransmissionHistory& history, const OutageContext& ctx);

namespace detail {

// Flat-history forms used on the simulation hot path: `helpers` already
// includes the candidate as its last element and `known` is the receiver's
// decoding set.
bool ir_mu_individual(unsigned s, std::span<const HelpRecord> helpers, SourceSet known,
                      const OutageContext& ctx);
bool ir_mu_common(SourceSet B, std::span<const HelpRecord> helpers, SourceSet known,
                  const OutageContext& ctx);
bool ir_su_individual(unsigned s, std::span<const HelpRecord> helpers, const OutageContext& ctx);
double cc_mrc(unsigned s, std::span<const HelpRecord> helpers, const OutageContext& ctx);
bool cc_individual(unsigned s, std::span<const HelpRecord> helpers, const OutageContext& ctx);

}  // namespace detail

}  // namespace coharq
