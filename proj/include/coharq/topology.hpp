#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "coharq/source_set.hpp"

namespace coharq {

enum class NodeKind { Source, Relay, Destination };

/// A node of the network. Sources and relays carry a 1-based index; the
/// destination has index 0.
struct NodeId {
    NodeKind kind = NodeKind::Destination;
    unsigned index = 0;

    static constexpr NodeId source(unsigned i) { return {NodeKind::Source, i}; }
    static constexpr NodeId relay(unsigned i) { return {NodeKind::Relay, i}; }
    static constexpr NodeId destination() { return {NodeKind::Destination, 0}; }

    constexpr bool is_source() const { return kind == NodeKind::Source; }
    constexpr bool is_relay() const { return kind == NodeKind::Relay; }
    constexpr bool is_destination() const { return kind == NodeKind::Destination; }

    constexpr bool operator==(const NodeId&) const = default;

    std::string to_string() const {
        switch (kind) {
            case NodeKind::Source: return "s" + std::to_string(index);
            case NodeKind::Relay: return "r" + std::to_string(index);
            case NodeKind::Destination: break;
        }
        return "d";
    }
};

/// M sources, L relays and one destination. Nodes are densely numbered
/// sources first, then relays, destination last; this is also the
/// deterministic ordering used for scheduling tie-breaks.
class Topology {
public:
    Topology() = default;
    Topology(unsigned num_sources, unsigned num_relays)
        : sources_(num_sources), relays_(num_relays) {
        if (num_sources < 1 || num_sources > kMaxSources)
            throw std::invalid_argument("number of sources must be in [1, " +
                                        std::to_string(kMaxSources) + "]");
    }

    unsigned num_sources() const { return sources_; }
    unsigned num_relays() const { return relays_; }
    unsigned num_nodes() const { return sources_ + relays_ + 1; }
    /// Sources plus relays, i.e. the nodes that can be scheduled.
    unsigned num_transmitters() const { return sources_ + relays_; }
    unsigned destination_index() const { return sources_ + relays_; }
    SourceSet all_sources() const { return SourceSet::all(sources_); }

    bool valid(NodeId n) const {
        switch (n.kind) {
            case NodeKind::Source: return n.index >= 1 && n.index <= sources_;
            case NodeKind::Relay: return n.index >= 1 && n.index <= relays_;
            case NodeKind::Destination: return true;
        }
        return false;
    }

    unsigned dense(NodeId n) const {
        if (!valid(n)) throw std::out_of_range("node " + n.to_string() + " not in topology");
        switch (n.kind) {
            case NodeKind::Source: return n.index - 1;
            case NodeKind::Relay: return sources_ + n.index - 1;
            case NodeKind::Destination: break;
        }
        return destination_index();
    }

    NodeId node(unsigned dense_index) const {
        if (dense_index < sources_) return NodeId::source(dense_index + 1);
        if (dense_index < sources_ + relays_) return NodeId::relay(dense_index - sources_ + 1);
        if (dense_index == destination_index()) return NodeId::destination();
        throw std::out_of_range("dense node index out of range");
    }

    bool operator==(const Topology&) const = default;

private:
    unsigned sources_ = 1;
    unsigned relays_ = 0;
};

}  // namespace coharq
