#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coharq/channel.hpp"
#include "coharq/outage.hpp"
#include "coharq/rng.hpp"

namespace coharq {

enum class ProtocolKind { IrMu, IrSu, Cc };

std::string_view to_string(ProtocolKind kind);
/// Accepts "IR_MU", "IR_SU", "CC" (case-insensitive, '-' allowed for '_').
ProtocolKind parse_protocol(std::string_view name);

struct HarqConfig {
    ProtocolKind protocol = ProtocolKind::IrMu;
    /// N2 / N1.
    double alpha = 0.5;
    /// Maximum number of retransmission rounds T. Zero disables the second phase.
    unsigned max_rounds = 4;

    /// Throws std::invalid_argument on alpha <= 0 or chase combining with alpha != 1.
    void validate() const;
};

/// Who transmits in a round and, for single-source protocols, for whom.
struct RoundChoice {
    NodeId node;
    std::optional<NodeId> helped_source;
};

struct ProtocolState {
    Topology topology;
    /// Decoding set of every node, indexed densely (sources, relays, destination).
    std::vector<SourceSet> decoding_sets;
    std::vector<HelpRecord> history;
    unsigned round = 0;

    SourceSet decoding_set(NodeId n) const { return decoding_sets[topology.dense(n)]; }
    SourceSet destination_set() const { return decoding_sets[topology.destination_index()]; }
    /// Sources the destination still misses.
    SourceSet undecoded() const { return topology.all_sources() - destination_set(); }
    /// History as the destination sees it.
    TransmissionHistory destination_history() const { return {history, destination_set()}; }
};

struct FrameResult {
    /// Retransmission rounds executed; 0 when the first phase sufficed.
    unsigned t_used = 0;
    SourceSet final_destination_set;

    bool outage(unsigned s) const { return !final_destination_set.contains(s); }
    std::vector<bool> outage_flags(unsigned num_sources) const;
};

/// Sources take turns; every other node listens. Own messages are always known.
ProtocolState run_first_phase(std::span<const double> rates, const ChannelRealization& realization,
                              const HarqConfig& cfg);

/// Sources and relays holding at least one message the destination misses.
std::vector<NodeId> eligible_candidates(const ProtocolState& state);

/// The eligible node with the strongest link to the destination; ties go to
/// the earlier node (s1..sM, then r1..rL).
NodeId select_node(const ProtocolState& state, const ChannelRealization& realization);

/// Uniform pick among the sources the selected node holds and the
/// destination misses.
NodeId choose_helped_source(NodeId selected, const ProtocolState& state, StreamRng& rng);

/// Executes one retransmission round in place and returns what was
/// scheduled. `forced` overrides the scheduler (used to pin two protocols
/// to the same schedule); it must name a transmitter and, for single-source
/// protocols, a source that node has decoded.
RoundChoice run_round(ProtocolState& state, const ChannelRealization& realization,
                      std::span<const double> rates, const HarqConfig& cfg, StreamRng& rng,
                      const std::optional<RoundChoice>& forced = std::nullopt);

/// One frame on a given realization with the given choice stream.
FrameResult simulate_frame(const ChannelRealization& realization, std::span<const double> rates,
                           const HarqConfig& cfg, StreamRng& choices);

/// One frame fully determined by (cdi, rates, cfg, seed, frame_index).
FrameResult simulate_frame(const Cdi& cdi, std::span<const double> rates, const HarqConfig& cfg,
                           std::uint64_t seed, std::uint64_t frame_index);

/// Round-by-round record of one frame, for debugging and the trace command.
struct FrameTrace {
    ChannelRealization realization;
    /// states[0] is after the first phase, states[t] after round t.
    std::vector<ProtocolState> states;
    std::vector<RoundChoice> choices;
    FrameResult result;
};

FrameTrace trace_frame(const Cdi& cdi, std::span<const double> rates, const HarqConfig& cfg,
                       std::uint64_t seed, std::uint64_t frame_index);

}  // namespace coharq
