#include "coharq/protocol.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <stdexcept>
#include <string>

namespace coharq {

std::string_view to_string(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::IrMu: return "IR_MU";
        case ProtocolKind::IrSu: return "IR_SU";
        case ProtocolKind::Cc: return "CC";
    }
    return "?";
}

ProtocolKind parse_protocol(std::string_view name) {
    std::string key;
    for (char c : name) key += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (key == "IR_MU") return ProtocolKind::IrMu;
    if (key == "IR_SU") return ProtocolKind::IrSu;
    if (key == "CC") return ProtocolKind::Cc;
    throw std::invalid_argument("unknown protocol '" + std::string(name) + "' (expected IR_MU, IR_SU or CC)");
}

void HarqConfig::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    if (protocol == ProtocolKind::Cc && alpha != 1.0)
        throw std::invalid_argument("chase combining requires alpha = 1");
}

std::vector<bool> FrameResult::outage_flags(unsigned num_sources) const {
    std::vector<bool> flags(num_sources);
    for (unsigned s = 0; s < num_sources; ++s) flags[s] = outage(s);
    return flags;
}

ProtocolState run_first_phase(std::span<const double> rates, const ChannelRealization& realization,
                              const HarqConfig& cfg) {
    cfg.validate();
    const Topology& topo = realization.topology();
    const unsigned M = topo.num_sources();
    if (rates.size() != M)
        throw std::invalid_argument("expected " + std::to_string(M) + " source rates, got " +
                                    std::to_string(rates.size()));

    ProtocolState state{topo, std::vector<SourceSet>(topo.num_nodes()), {}, 0};
    for (unsigned s = 0; s < M; ++s) state.decoding_sets[s].insert(s);
    for (unsigned s = 0; s < M; ++s)
        for (unsigned rx = 0; rx < topo.num_nodes(); ++rx)
            if (rx != s && !(rates[s] > realization.mi(s, rx))) state.decoding_sets[rx].insert(s);
    return state;
}

std::vector<NodeId> eligible_candidates(const ProtocolState& state) {
    const SourceSet missing = state.undecoded();
    std::vector<NodeId> out;
    for (unsigned a = 0; a < state.topology.num_transmitters(); ++a)
        if (state.decoding_sets[a].intersects(missing)) out.push_back(state.topology.node(a));
    return out;
}

NodeId select_node(const ProtocolState& state, const ChannelRealization& realization) {
    const SourceSet missing = state.undecoded();
    const unsigned d = state.topology.destination_index();
    std::optional<unsigned> best;
    for (unsigned a = 0; a < state.topology.num_transmitters(); ++a) {
        if (!state.decoding_sets[a].intersects(missing)) continue;
        if (!best || realization.mi(a, d) > realization.mi(*best, d)) best = a;
    }
    if (!best) throw std::logic_error("select_node: no eligible node");
    return state.topology.node(*best);
}

NodeId choose_helped_source(NodeId selected, const ProtocolState& state, StreamRng& rng) {
    const SourceSet pool = state.decoding_set(selected) & state.undecoded();
    if (pool.empty())
        throw std::logic_error("choose_helped_source: " + selected.to_string() +
                               " holds no message the destination misses");
    std::uniform_int_distribution<unsigned> pick(0, pool.size() - 1);
    unsigned k = pick(rng);
    unsigned chosen = 0;
    pool.for_each([&](unsigned s) {
        if (k-- == 0) chosen = s;
    });
    return NodeId::source(chosen + 1);
}

namespace {

bool still_in_outage(unsigned s, std::span<const HelpRecord> helpers, SourceSet known,
                     const OutageContext& ctx, ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::IrMu: return detail::ir_mu_individual(s, helpers, known, ctx);
        case ProtocolKind::IrSu: return detail::ir_su_individual(s, helpers, ctx);
        case ProtocolKind::Cc: return detail::cc_individual(s, helpers, ctx);
    }
    return true;
}

RoundChoice checked_forced_choice(const RoundChoice& forced, const ProtocolState& state,
                                  const HarqConfig& cfg) {
    const Topology& topo = state.topology;
    if (!topo.valid(forced.node) || forced.node.is_destination())
        throw std::invalid_argument("forced choice must name a source or relay");
    if (cfg.protocol == ProtocolKind::IrMu) return {forced.node, std::nullopt};
    if (!forced.helped_source || !forced.helped_source->is_source() ||
        !topo.valid(*forced.helped_source))
        throw std::invalid_argument("forced choice lacks a helped source");
    if (!state.decoding_set(forced.node).contains(forced.helped_source->index - 1))
        throw std::invalid_argument("forced helper " + forced.node.to_string() +
                                    " has not decoded " + forced.helped_source->to_string());
    return forced;
}

}  // namespace

RoundChoice run_round(ProtocolState& state, const ChannelRealization& realization,
                      std::span<const double> rates, const HarqConfig& cfg, StreamRng& rng,
                      const std::optional<RoundChoice>& forced) {
    if (state.round >= cfg.max_rounds) throw std::logic_error("run_round: round budget exhausted");
    if (state.undecoded().empty()) throw std::logic_error("run_round: destination already decoded all sources");

    RoundChoice choice;
    if (forced) {
        choice = checked_forced_choice(*forced, state, cfg);
    } else {
        choice.node = select_node(state, realization);
        if (cfg.protocol != ProtocolKind::IrMu)
            choice.helped_source = choose_helped_source(choice.node, state, rng);
    }

    const Topology& topo = state.topology;
    const unsigned tx = topo.dense(choice.node);
    state.history.push_back({choice.node, state.decoding_sets[tx], choice.helped_source});

    const SourceSet all = topo.all_sources();
    for (unsigned rx = 0; rx < topo.num_nodes(); ++rx) {
        if (rx == tx) continue;
        const SourceSet known = state.decoding_sets[rx];
        const SourceSet missing = all - known;
        if (missing.empty()) continue;
        const OutageContext ctx{rates, realization, cfg.alpha, topo.node(rx)};
        SourceSet gained;
        missing.for_each([&](unsigned s) {
            if (!still_in_outage(s, state.history, known, ctx, cfg.protocol)) gained.insert(s);
        });
        state.decoding_sets[rx] |= gained;
    }
    ++state.round;
    return choice;
}

namespace {

FrameResult run_frame(const ChannelRealization& realization, std::span<const double> rates,
                      const HarqConfig& cfg, StreamRng& choices, FrameTrace* trace) {
    ProtocolState state = run_first_phase(rates, realization, cfg);
    if (trace) trace->states.push_back(state);
    while (!state.undecoded().empty() && state.round < cfg.max_rounds) {
        RoundChoice c = run_round(state, realization, rates, cfg, choices);
        if (trace) {
            trace->choices.push_back(c);
            trace->states.push_back(state);
        }
    }
    return {state.round, state.destination_set()};
}

}  // namespace

FrameResult simulate_frame(const ChannelRealization& realization, std::span<const double> rates,
                           const HarqConfig& cfg, StreamRng& choices) {
    return run_frame(realization, rates, cfg, choices, nullptr);
}

FrameResult simulate_frame(const Cdi& cdi, std::span<const double> rates, const HarqConfig& cfg,
                           std::uint64_t seed, std::uint64_t frame_index) {
    const ChannelRealization realization = draw_realization(cdi, seed, frame_index);
    StreamRng choices = StreamRng::for_frame(seed, frame_index, StreamPurpose::Choices);
    return run_frame(realization, rates, cfg, choices, nullptr);
}

FrameTrace trace_frame(const Cdi& cdi, std::span<const double> rates, const HarqConfig& cfg,
                       std::uint64_t seed, std::uint64_t frame_index) {
    FrameTrace trace{draw_realization(cdi, seed, frame_index), {}, {}, {}};
    StreamRng choices = StreamRng::for_frame(seed, frame_index, StreamPurpose::Choices);
    trace.result = run_frame(trace.realization, rates, cfg, choices, &trace);
    return trace;
}

}  // namespace coharq
