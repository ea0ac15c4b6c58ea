#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "coharq/rng.hpp"
#include "coharq/topology.hpp"

namespace coharq {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// I = log2(1 + g) in bits per channel use, for Gaussian inputs.
double mutual_information(double squared_gain);

/// Channel distribution information: the average SNR of every node pair,
/// linear scale, symmetric.
class Cdi {
public:
    explicit Cdi(Topology topology);

    const Topology& topology() const { return topology_; }

    void set(NodeId a, NodeId b, double gamma_linear);
    void set_db(NodeId a, NodeId b, double gamma_db) { set(a, b, db_to_linear(gamma_db)); }
    /// Sets every pair to the same average SNR.
    void fill(double gamma_linear);

    double gamma(NodeId a, NodeId b) const;
    double gamma(unsigned a, unsigned b) const { return gamma_[a * n_ + b]; }

private:
    Topology topology_;
    unsigned n_;
    std::vector<double> gamma_;
};

/// Instantaneous squared link magnitudes |h_{a,b}|^2 for one frame, with
/// the matching mutual informations cached. Row index is the transmitter.
class ChannelRealization {
public:
    explicit ChannelRealization(Topology topology);

    const Topology& topology() const { return topology_; }

    double gain(unsigned tx, unsigned rx) const { return gain_[tx * n_ + rx]; }
    double gain(NodeId tx, NodeId rx) const {
        return gain(topology_.dense(tx), topology_.dense(rx));
    }
    double mi(unsigned tx, unsigned rx) const { return mi_[tx * n_ + rx]; }
    double mi(NodeId tx, NodeId rx) const { return mi(topology_.dense(tx), topology_.dense(rx)); }

    /// Overwrites one directed link; used by tests and by the drawing routine.
    void set_gain(NodeId tx, NodeId rx, double g) {
        set_gain(topology_.dense(tx), topology_.dense(rx), g);
    }
    void set_gain(unsigned tx, unsigned rx, double g);
    void fill(double g);

private:
    Topology topology_;
    unsigned n_;
    std::vector<double> gain_;
    std::vector<double> mi_;
};

/// Draws every directed link independently, g ~ Exp(mean gamma).
ChannelRealization draw_realization(const Cdi& cdi, StreamRng& rng);

/// The realization of frame `frame` under master seed `seed`.
ChannelRealization draw_realization(const Cdi& cdi, std::uint64_t seed, std::uint64_t frame);

/// Pre-drawn realizations for frames [0, n). Lets many rate tuples share the
/// same channel samples without redrawing them.
class RealizationBank {
public:
    RealizationBank(const Cdi& cdi, std::uint64_t seed, std::size_t frames);

    std::size_t size() const { return frames_.size(); }
    const ChannelRealization& operator[](std::size_t i) const { return frames_[i]; }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::vector<ChannelRealization> frames_;
};

}  // namespace coharq
