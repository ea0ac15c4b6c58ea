#include "coharq/channel.hpp"

#include <random>
#include <stdexcept>

namespace coharq {

double mutual_information(double squared_gain) {
    if (!(squared_gain >= 0.0))
        throw std::invalid_argument("mutual_information: squared gain must be >= 0");
    return std::log2(1.0 + squared_gain);
}

Cdi::Cdi(Topology topology)
    : topology_(topology), n_(topology.num_nodes()), gamma_(n_ * n_, 0.0) {}

void Cdi::set(NodeId a, NodeId b, double gamma_linear) {
    if (!(gamma_linear >= 0.0)) throw std::invalid_argument("average SNR must be >= 0");
    const unsigned i = topology_.dense(a);
    const unsigned j = topology_.dense(b);
    if (i == j) throw std::invalid_argument("average SNR undefined for a node with itself");
    gamma_[i * n_ + j] = gamma_linear;
    gamma_[j * n_ + i] = gamma_linear;
}

void Cdi::fill(double gamma_linear) {
    if (!(gamma_linear >= 0.0)) throw std::invalid_argument("average SNR must be >= 0");
    for (unsigned i = 0; i < n_; ++i)
        for (unsigned j = 0; j < n_; ++j) gamma_[i * n_ + j] = i == j ? 0.0 : gamma_linear;
}

double Cdi::gamma(NodeId a, NodeId b) const {
    const unsigned i = topology_.dense(a);
    const unsigned j = topology_.dense(b);
    if (i == j) throw std::invalid_argument("average SNR undefined for a node with itself");
    return gamma_[i * n_ + j];
}

ChannelRealization::ChannelRealization(Topology topology)
    : topology_(topology),
      n_(topology.num_nodes()),
      gain_(n_ * n_, 0.0),
      mi_(n_ * n_, 0.0) {}

void ChannelRealization::set_gain(unsigned tx, unsigned rx, double g) {
    gain_[tx * n_ + rx] = g;
    mi_[tx * n_ + rx] = mutual_information(g);
}

void ChannelRealization::fill(double g) {
    for (unsigned i = 0; i < n_; ++i)
        for (unsigned j = 0; j < n_; ++j)
            if (i != j) set_gain(i, j, g);
}

ChannelRealization draw_realization(const Cdi& cdi, StreamRng& rng) {
    const Topology& topo = cdi.topology();
    ChannelRealization out(topo);
    std::exponential_distribution<double> unit_exp(1.0);
    // The destination never transmits, so its outgoing row stays zero.
    for (unsigned tx = 0; tx < topo.num_transmitters(); ++tx) {
        for (unsigned rx = 0; rx < topo.num_nodes(); ++rx) {
            if (rx == tx) continue;
            out.set_gain(tx, rx, cdi.gamma(tx, rx) * unit_exp(rng));
        }
    }
    return out;
}

ChannelRealization draw_realization(const Cdi& cdi, std::uint64_t seed, std::uint64_t frame) {
    StreamRng rng = StreamRng::for_frame(seed, frame, StreamPurpose::Channel);
    return draw_realization(cdi, rng);
}

RealizationBank::RealizationBank(const Cdi& cdi, std::uint64_t seed, std::size_t frames)
    : seed_(seed) {
    frames_.reserve(frames);
    for (std::size_t f = 0; f < frames; ++f) frames_.push_back(draw_realization(cdi, seed, f));
}

}  // namespace coharq
