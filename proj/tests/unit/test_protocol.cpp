#include <doctest.h>

#include <cmath>
#include <random>

#include "coharq/protocol.hpp"
#include "coharq/scenario.hpp"
#include "../support/dominance.hpp"

using namespace coharq;

namespace {

const NodeId s1 = NodeId::source(1);
const NodeId s2 = NodeId::source(2);
const NodeId s3 = NodeId::source(3);
const NodeId r1 = NodeId::relay(1);
const NodeId r2 = NodeId::relay(2);
const NodeId d = NodeId::destination();

ProtocolState blank_state(Topology topo) {
    ProtocolState st{topo, std::vector<SourceSet>(topo.num_nodes()), {}, 0};
    for (unsigned s = 0; s < topo.num_sources(); ++s) st.decoding_sets[s].insert(s);
    return st;
}

}  // namespace

TEST_CASE("first phase") {
    const Topology topo(3, 2);
    const HarqConfig cfg{ProtocolKind::IrMu, 0.5, 4};
    std::vector<double> rates{3.5, 3.5, 3.5};

    SUBCASE("strong links: everyone decodes everything") {
        ChannelRealization real(topo);
        real.fill(1e6);
        const auto st = run_first_phase(rates, real, cfg);
        for (const SourceSet& set : st.decoding_sets) CHECK(set == topo.all_sources());
        CHECK(st.round == 0);
        CHECK(st.history.empty());
    }

    SUBCASE("dead links: only own messages") {
        ChannelRealization real(topo);
        const auto st = run_first_phase(rates, real, cfg);
        for (unsigned s = 0; s < 3; ++s) CHECK(st.decoding_sets[s] == SourceSet::single(s));
        CHECK(st.decoding_set(r1).empty());
        CHECK(st.destination_set().empty());
    }

    SUBCASE("boundary rate decodes") {
        ChannelRealization real(topo);
        real.set_gain(s1, d, 1.0);
        std::vector<double> ones{1.0, 1.0, 1.0};
        CHECK(run_first_phase(ones, real, cfg).destination_set() == SourceSet::single(0));
    }

    SUBCASE("wrong number of rates is rejected") {
        ChannelRealization real(topo);
        std::vector<double> two{1.0, 1.0};
        CHECK_THROWS_AS(run_first_phase(two, real, cfg), std::invalid_argument);
    }
}

TEST_CASE("eligibility and node selection") {
    const Topology topo(2, 2);
    ChannelRealization real(topo);
    real.set_gain(r1, d, 3.0);   // I = 2
    real.set_gain(s2, d, std::exp2(1.5) - 1.0);
    real.set_gain(r2, d, 100.0);

    ProtocolState st = blank_state(topo);
    st.decoding_sets[topo.dense(d)] = SourceSet::single(0);  // missing s2
    st.decoding_sets[topo.dense(r1)] = SourceSet(0b11);
    st.decoding_sets[topo.dense(r2)] = SourceSet::single(0);  // useless to d

    const auto eligible = eligible_candidates(st);
    REQUIRE(eligible.size() == 2);
    CHECK(eligible[0] == s2);
    CHECK(eligible[1] == r1);
    CHECK(select_node(st, real) == r1);

    SUBCASE("only the undecoded source itself") {
        st.decoding_sets[topo.dense(r1)] = SourceSet{};
        CHECK(eligible_candidates(st) == std::vector<NodeId>{s2});
        CHECK(select_node(st, real) == s2);
    }

    SUBCASE("ties go to the earlier node") {
        real.set_gain(s2, d, 3.0);
        CHECK(select_node(st, real) == s2);
    }

    SUBCASE("complete destination: nothing to select") {
        st.decoding_sets[topo.dense(d)] = SourceSet(0b11);
        CHECK(eligible_candidates(st).empty());
        CHECK_THROWS_AS(select_node(st, real), std::logic_error);
    }
}

TEST_CASE("helped-source choice") {
    const Topology topo(3, 1);
    ProtocolState st = blank_state(topo);
    st.decoding_sets[topo.dense(d)] = SourceSet::single(0);

    SUBCASE("singleton intersection") {
        st.decoding_sets[topo.dense(r1)] = SourceSet(0b101);
        StreamRng rng(5);
        for (int i = 0; i < 50; ++i) CHECK(choose_helped_source(r1, st, rng) == s3);
    }

    SUBCASE("uniform over the intersection") {
        st.decoding_sets[topo.dense(r1)] = SourceSet(0b111);
        StreamRng rng(6);
        const int n = 100'000;
        int count_s2 = 0;
        for (int i = 0; i < n; ++i) {
            const NodeId pick = choose_helped_source(r1, st, rng);
            REQUIRE((pick == s2 || pick == s3));
            count_s2 += pick == s2;
        }
        const double freq = static_cast<double>(count_s2) / n;
        CHECK(std::abs(freq - 0.5) < 0.01);
        // Chi-square with one degree of freedom, 99.9% quantile 10.83.
        const double expected = n / 2.0;
        const double chi2 = 2.0 * std::pow(count_s2 - expected, 2) / expected;
        CHECK(chi2 < 10.83);
    }

    SUBCASE("node holding nothing useful is rejected") {
        st.decoding_sets[topo.dense(r1)] = SourceSet(0b001);
        StreamRng rng(1);
        CHECK_THROWS_AS(choose_helped_source(r1, st, rng), std::logic_error);
    }
}

TEST_CASE("retransmission rounds") {
    SUBCASE("a strong helper completes the destination") {
        const Topology topo(1, 1);
        ChannelRealization real(topo);
        real.set_gain(s1, r1, 1e6);
        real.set_gain(r1, d, 1e6);
        std::vector<double> rates{3.5};
        const HarqConfig cfg{ProtocolKind::IrSu, 0.5, 4};
        auto st = run_first_phase(rates, real, cfg);
        CHECK(st.destination_set().empty());
        StreamRng rng(1);
        const RoundChoice c = run_round(st, real, rates, cfg, rng);
        CHECK(c.node == r1);
        CHECK(c.helped_source == s1);
        CHECK(st.destination_set() == SourceSet::single(0));
        CHECK(st.round == 1);
        REQUIRE(st.history.size() == 1);
        CHECK(st.history[0].decoding_set == SourceSet::single(0));
    }

    SUBCASE("a transmission nobody hears changes no set") {
        const Topology topo(2, 1);
        ChannelRealization real(topo);
        std::vector<double> rates{1.0, 1.0};
        const HarqConfig cfg{ProtocolKind::IrMu, 0.5, 4};
        auto st = run_first_phase(rates, real, cfg);
        const auto before = st.decoding_sets;
        StreamRng rng(1);
        run_round(st, real, rates, cfg, rng);
        CHECK(st.decoding_sets == before);
        CHECK(st.round == 1);
        CHECK(st.history.size() == 1);
    }

    SUBCASE("chase combining accumulates SNR over repeated help") {
        const Topology topo(1, 2);
        ChannelRealization real(topo);
        real.set_gain(s1, d, 0.2);
        real.set_gain(s1, r1, 1e6);
        real.set_gain(s1, r2, 1e6);
        real.set_gain(r1, d, 1.0);
        real.set_gain(r2, d, 1.5);
        std::vector<double> rates{2.0};
        const HarqConfig cfg{ProtocolKind::Cc, 1.0, 4};
        auto st = run_first_phase(rates, real, cfg);
        StreamRng rng(3);

        run_round(st, real, rates, cfg, rng);
        CHECK(st.history.back().node == r2);
        // log2(1 + 0.2 + 1.5) < 2
        CHECK(st.destination_set().empty());
        run_round(st, real, rates, cfg, rng);
        // log2(1 + 0.2 + 1.5 + 1.5) = log2(4.2) >= 2
        CHECK(std::log2(1.0 + 0.2 + 1.5 + 1.5) >= 2.0);
        CHECK(st.destination_set() == SourceSet::single(0));
    }

    SUBCASE("round budget and completed frames are rejected") {
        const Topology topo(1, 0);
        ChannelRealization real(topo);
        std::vector<double> rates{1.0};
        const HarqConfig cfg{ProtocolKind::IrSu, 0.5, 1};
        auto st = run_first_phase(rates, real, cfg);
        StreamRng rng(1);
        run_round(st, real, rates, cfg, rng);
        CHECK_THROWS_AS(run_round(st, real, rates, cfg, rng), std::logic_error);

        real.fill(1e6);
        auto done = run_first_phase(rates, real, cfg);
        CHECK_THROWS_AS(run_round(done, real, rates, cfg, rng), std::logic_error);
    }

    SUBCASE("forced choices must be consistent") {
        const Topology topo(2, 1);
        ChannelRealization real(topo);
        std::vector<double> rates{1.0, 1.0};
        const HarqConfig cfg{ProtocolKind::IrSu, 0.5, 4};
        auto st = run_first_phase(rates, real, cfg);
        StreamRng rng(1);
        CHECK_THROWS_AS(run_round(st, real, rates, cfg, rng, RoundChoice{r1, s1}), std::invalid_argument);
        CHECK_THROWS_AS(run_round(st, real, rates, cfg, rng, RoundChoice{s1, std::nullopt}), std::invalid_argument);
        CHECK_THROWS_AS(run_round(st, real, rates, cfg, rng, RoundChoice{d, s1}), std::invalid_argument);
        run_round(st, real, rates, cfg, rng, RoundChoice{s2, s2});
        CHECK(st.history.back().node == s2);
    }
}

TEST_CASE("whole frames") {
    const Scenario sc = scenario_by_name("asym-3x3");
    std::vector<double> rates{2.0, 1.5, 1.0};

    SUBCASE("perfect links finish in the first phase") {
        const auto r = simulate_frame(sc.cdi(300.0), rates, sc.config(ProtocolKind::IrMu), 1, 0);
        CHECK(r.t_used == 0);
        CHECK(r.final_destination_set == SourceSet::all(3));
    }

    SUBCASE("dead links use every round and decode nothing") {
        Cdi dead(sc.topology);
        for (ProtocolKind k : {ProtocolKind::IrMu, ProtocolKind::IrSu, ProtocolKind::Cc}) {
            const HarqConfig cfg = sc.config(k);
            const auto r = simulate_frame(dead, rates, cfg, 1, 0);
            CHECK(r.t_used == cfg.max_rounds);
            CHECK(r.final_destination_set.empty());
            CHECK(r.outage_flags(3) == std::vector<bool>{true, true, true});
        }
    }

    SUBCASE("chase combining with alpha != 1 is rejected") {
        CHECK_THROWS_AS(simulate_frame(sc.cdi(0.0), rates, HarqConfig{ProtocolKind::Cc, 0.5, 2}, 1, 0),
                        std::invalid_argument);
    }

    SUBCASE("deterministic given seed and frame") {
        const Cdi cdi = sc.cdi(5.0);
        for (std::uint64_t f = 0; f < 50; ++f) {
            const auto a = simulate_frame(cdi, rates, sc.config(ProtocolKind::IrSu), 77, f);
            const auto b = simulate_frame(cdi, rates, sc.config(ProtocolKind::IrSu), 77, f);
            CHECK(a.t_used == b.t_used);
            CHECK(a.final_destination_set == b.final_destination_set);
        }
    }
}

TEST_CASE("frame invariants over random frames") {
    std::mt19937_64 pick(8);
    const std::vector<std::string> names{"asym-3x3", "asym-4x3", "sym-3", "sym-5"};
    const double mcs[] = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
    for (int trial = 0; trial < 400; ++trial) {
        const Scenario sc = scenario_by_name(names[trial % names.size()]);
        const unsigned M = sc.topology.num_sources();
        std::vector<double> rates(M);
        for (auto& r : rates) r = mcs[std::uniform_int_distribution<int>(0, 6)(pick)];
        const double gamma_db = std::uniform_real_distribution<double>(-5.0, 20.0)(pick);
        const ProtocolKind kind = static_cast<ProtocolKind>(trial % 3);
        const HarqConfig cfg = sc.config(kind);
        const auto trace = trace_frame(sc.cdi(gamma_db), rates, cfg, 1234, trial);

        CHECK(trace.result.t_used <= cfg.max_rounds);
        CHECK(trace.result.t_used == trace.choices.size());
        CHECK((trace.result.t_used == 0) == (trace.states[0].undecoded().empty()));
        for (std::size_t t = 0; t < trace.states.size(); ++t) {
            const ProtocolState& st = trace.states[t];
            for (unsigned s = 0; s < M; ++s) CHECK(st.decoding_sets[s].contains(s));
            if (t == 0) continue;
            const ProtocolState& prev = trace.states[t - 1];
            for (unsigned n = 0; n < sc.topology.num_nodes(); ++n)
                CHECK(prev.decoding_sets[n].subset_of(st.decoding_sets[n]));
            const RoundChoice& c = trace.choices[t - 1];
            CHECK(prev.decoding_set(c.node).intersects(prev.undecoded()));
            CHECK(st.history[t - 1].decoding_set == prev.decoding_set(c.node));
            if (kind != ProtocolKind::IrMu) {
                REQUIRE(c.helped_source.has_value());
                CHECK(prev.undecoded().contains(c.helped_source->index - 1));
            }
        }
    }
}

TEST_CASE("chase combining never beats IR-SU on a pinned schedule") {
    const Scenario sc = scenario_by_name("asym-3x3");
    std::vector<double> rates{2.0, 1.5, 1.0};
    for (double gamma_db : {0.0, 5.0, 10.0}) {
        const Cdi cdi = sc.cdi(gamma_db);
        for (std::uint64_t f = 0; f < 300; ++f) {
            const auto out = testing_support::check_pinned_dominance(cdi, rates, 4, 9, f);
            CHECK(out.violations == 0);
        }
    }
}
