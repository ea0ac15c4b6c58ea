#include <doctest.h>

#include <cmath>
#include <random>

#include "coharq/outage.hpp"
#include "../support/outage_oracle.hpp"
#include "../support/random_instances.hpp"

using namespace coharq;

namespace {

double gain_for_mi(double mi) { return std::exp2(mi) - 1.0; }

const NodeId s1 = NodeId::source(1);
const NodeId s2 = NodeId::source(2);
const NodeId r1 = NodeId::relay(1);
const NodeId d = NodeId::destination();

// Two sources, one relay; direct links to the destination carry the given MI.
ChannelRealization two_source_links(double mi1, double mi2, double relay_mi) {
    ChannelRealization real(Topology(2, 1));
    real.set_gain(s1, d, gain_for_mi(mi1));
    real.set_gain(s2, d, gain_for_mi(mi2));
    real.set_gain(r1, d, gain_for_mi(relay_mi));
    return real;
}

}  // namespace

TEST_CASE("IR-MU common outage on hand-checked instances") {
    std::vector<double> rates{1.0, 1.0};

    SUBCASE("no history reduces to the direct-link constraint") {
        auto real = two_source_links(1.5, 0.0, 0.0);
        const OutageContext ctx{rates, real, 0.5};
        const TransmissionHistory empty{{}, SourceSet::single(1)};
        CHECK_FALSE(ir_mu_common_outage(SourceSet::single(0), std::nullopt, empty, ctx));

        auto weak = two_source_links(0.6, 0.0, 0.0);
        const OutageContext weak_ctx{rates, weak, 0.5};
        CHECK(ir_mu_common_outage(SourceSet::single(0), std::nullopt, empty, weak_ctx));
    }

    SUBCASE("relay holding both messages lifts every sum-rate constraint") {
        // U={s1}: 1 > 0.6+1.0 no; U={s2}: no; U={s1,s2}: 2 > 1.2+1.0 no.
        auto real = two_source_links(0.6, 0.6, 2.0);
        const OutageContext ctx{rates, real, 0.5};
        const TransmissionHistory history{{}, SourceSet{}};
        const HelpRecord relay{r1, SourceSet(0b11), std::nullopt};
        CHECK_FALSE(ir_mu_common_outage(SourceSet(0b11), relay, history, ctx));

        oracle::Instance o{2, 4, 3, rates, {}, 0.5, 0, {{2, 0b11}}};
        o.mi.assign(4, std::vector<double>(4, 0.0));
        o.mi[0][3] = real.mi(0, 3);
        o.mi[1][3] = real.mi(1, 3);
        o.mi[2][3] = real.mi(2, 3);
        CHECK_FALSE(oracle::common_outage(o, 0b11));
    }

    SUBCASE("empty B is never in outage") {
        auto real = two_source_links(0.0, 0.0, 0.0);
        const OutageContext ctx{rates, real, 0.5};
        CHECK_FALSE(ir_mu_common_outage(SourceSet{}, std::nullopt, {{}, SourceSet{}}, ctx));
    }

    SUBCASE("B outside the undecoded set is rejected") {
        auto real = two_source_links(0.0, 0.0, 0.0);
        const OutageContext ctx{rates, real, 0.5};
        CHECK_THROWS_AS(ir_mu_common_outage(SourceSet::single(0), std::nullopt, {{}, SourceSet::single(0)}, ctx),
                        std::invalid_argument);
    }
}

TEST_CASE("IR-MU individual outage on hand-checked instances") {
    std::vector<double> rates{1.0, 1.0};

    SUBCASE("single undecoded source without help") {
        auto real = two_source_links(0.6, 5.0, 0.0);
        const OutageContext ctx{rates, real, 0.5};
        CHECK(ir_mu_individual_outage(0, std::nullopt, {{}, SourceSet::single(1)}, ctx));
    }

    SUBCASE("interference-free set I = {} admits no violated U") {
        auto real = two_source_links(0.6, 0.6, 2.0);
        const OutageContext ctx{rates, real, 0.5};
        const HelpRecord relay{r1, SourceSet(0b11), std::nullopt};
        CHECK_FALSE(ir_mu_individual_outage(0, relay, {{}, SourceSet{}}, ctx));
    }

    SUBCASE("direct links that satisfy every constraint jointly decode") {
        auto real = two_source_links(1.2, 1.1, 0.0);
        const OutageContext ctx{rates, real, 0.5};
        CHECK_FALSE(ir_mu_individual_outage(0, std::nullopt, {{}, SourceSet{}}, ctx));
        CHECK_FALSE(ir_mu_individual_outage(1, std::nullopt, {{}, SourceSet{}}, ctx));
    }

    SUBCASE("querying a decoded source is rejected") {
        auto real = two_source_links(0.6, 0.6, 0.0);
        const OutageContext ctx{rates, real, 0.5};
        CHECK_THROWS_AS(ir_mu_individual_outage(0, std::nullopt, {{}, SourceSet::single(0)}, ctx),
                        std::invalid_argument);
    }

    SUBCASE("helper equal to the receiver contributes nothing") {
        ChannelRealization real(Topology(2, 1));
        real.set_gain(s1, r1, gain_for_mi(0.6));
        real.set_gain(r1, d, 100.0);
        const OutageContext ctx{rates, real, 0.5, r1};
        const HelpRecord self{r1, SourceSet(0b01), std::nullopt};
        CHECK(ir_mu_individual_outage(0, self, {{}, SourceSet(0b10)}, ctx));
    }
}

TEST_CASE("IR-SU outage") {
    std::vector<double> rates{1.0, 1.0};
    auto real = two_source_links(0.6, 0.6, 2.0);
    const OutageContext ctx{rates, real, 0.5};
    const TransmissionHistory none{{}, SourceSet{}};

    CHECK_FALSE(ir_su_individual_outage(0, HelpRecord{r1, SourceSet(0b11), s1}, none, ctx));
    CHECK(ir_su_individual_outage(0, HelpRecord{r1, SourceSet(0b11), s2}, none, ctx));

    SUBCASE("equality decodes") {
        ChannelRealization exact(Topology(1, 0));
        exact.set_gain(s1, d, 1.0);
        std::vector<double> one{1.0};
        CHECK_FALSE(ir_su_individual_outage(0, std::nullopt, none, {one, exact, 0.5}));
    }

    SUBCASE("common outage is the union") {
        CHECK_FALSE(ir_su_common_outage(SourceSet{}, std::nullopt, none, ctx));
        const HelpRecord for_s1{r1, SourceSet(0b11), s1};
        CHECK(ir_su_common_outage(SourceSet(0b11), for_s1, none, ctx));
        CHECK_FALSE(ir_su_common_outage(SourceSet(0b01), for_s1, none, ctx));
        CHECK(ir_su_common_outage(SourceSet(0b10), for_s1, none, ctx) ==
              ir_su_individual_outage(1, for_s1, none, ctx));
    }

    SUBCASE("missing helped source is rejected") {
        CHECK_THROWS_AS(ir_su_individual_outage(0, HelpRecord{r1, SourceSet(0b11), std::nullopt}, none, ctx),
                        std::invalid_argument);
    }
}

TEST_CASE("Chase combining") {
    ChannelRealization real(Topology(2, 1));
    real.set_gain(s1, d, 0.5);
    real.set_gain(r1, d, 1.5);
    std::vector<double> rates{1.0, 0.5};
    const OutageContext ctx{rates, real, 1.0};
    const TransmissionHistory none{{}, SourceSet{}};

    CHECK(cc_mrc_snr(0, HelpRecord{r1, SourceSet(0b11), s1}, none, ctx) == doctest::Approx(2.0));
    CHECK(cc_mrc_snr(0, std::nullopt, none, ctx) == 0.5);
    CHECK(cc_mrc_snr(0, HelpRecord{r1, SourceSet(0b11), s2}, none, ctx) == 0.5);

    // log2(3) ~ 1.585 >= 1
    CHECK_FALSE(cc_individual_outage(0, HelpRecord{r1, SourceSet(0b11), s1}, none, ctx));
    // s2 has no direct link at all
    CHECK(cc_individual_outage(1, std::nullopt, none, ctx));

    SUBCASE("equality decodes") {
        ChannelRealization exact(Topology(1, 0));
        exact.set_gain(s1, d, 1.0);
        std::vector<double> one{1.0};
        CHECK_FALSE(cc_individual_outage(0, std::nullopt, none, {one, exact, 1.0}));
    }

    SUBCASE("common outage") {
        const HelpRecord for_s1{r1, SourceSet(0b11), s1};
        CHECK_FALSE(cc_common_outage(SourceSet{}, for_s1, none, ctx));
        CHECK(cc_common_outage(SourceSet(0b01), for_s1, none, ctx) == cc_individual_outage(0, for_s1, none, ctx));
        CHECK_FALSE(cc_common_outage(SourceSet(0b01), for_s1, none, ctx));
    }

    SUBCASE("alpha other than one is rejected") {
        const OutageContext bad{rates, real, 0.5};
        CHECK_THROWS_AS(cc_mrc_snr(0, std::nullopt, none, bad), std::invalid_argument);
    }
}

TEST_CASE("IR-MU evaluators agree with brute-force enumeration") {
    std::mt19937_64 rng(20240611);
    int outages = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto inst = testing_support::random_instance(rng);
        const auto o = inst.to_oracle();
        const auto ctx = inst.context();
        const auto history = inst.history_without_candidate();
        const SourceSet missing = inst.topology.all_sources() - inst.known;
        missing.for_each([&](unsigned s) {
            const bool got = ir_mu_individual_outage(s, inst.candidate(), history, ctx);
            outages += got;
            REQUIRE(got == oracle::individual_outage(o, static_cast<int>(s)));
        });
        missing.for_each_subset([&](SourceSet B) {
            REQUIRE(ir_mu_common_outage(B, inst.candidate(), history, ctx) == oracle::common_outage(o, B.mask()));
        });
    }
    // Both outcomes must be exercised for the comparison to mean anything.
    CHECK(outages > 100);
}

TEST_CASE("Extra help never creates an outage") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        auto inst = testing_support::random_instance(rng, 4, 6, true);
        if (inst.helpers.empty()) continue;
        const auto ctx = inst.context();
        const SourceSet missing = inst.topology.all_sources() - inst.known;
        std::vector<HelpRecord> fewer(inst.helpers.begin(), inst.helpers.end() - 1);
        const TransmissionHistory before{fewer, inst.known};
        const TransmissionHistory after{inst.helpers, inst.known};
        missing.for_each([&](unsigned s) {
            if (!ir_mu_individual_outage(s, std::nullopt, before, ctx))
                CHECK_FALSE(ir_mu_individual_outage(s, std::nullopt, after, ctx));
            if (!ir_su_individual_outage(s, std::nullopt, before, ctx))
                CHECK_FALSE(ir_su_individual_outage(s, std::nullopt, after, ctx));
            const OutageContext unit{ctx.rates, ctx.realization, 1.0, ctx.receiver};
            if (!cc_individual_outage(s, std::nullopt, before, unit))
                CHECK_FALSE(cc_individual_outage(s, std::nullopt, after, unit));
        });
    }
}

TEST_CASE("Chase combining decodes only where IR-SU does (alpha = 1)") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto inst = testing_support::random_instance(rng, 5, 8, true);
        const OutageContext ctx{inst.rates, inst.realization, 1.0, inst.receiver};
        const auto history = inst.history_without_candidate();
        (inst.topology.all_sources() - inst.known).for_each([&](unsigned s) {
            if (!cc_individual_outage(s, inst.candidate(), history, ctx))
                CHECK_FALSE(ir_su_individual_outage(s, inst.candidate(), history, ctx));
        });
    }
}

TEST_CASE("IR-MU with a single missing source reduces to IR-SU") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 500; ++trial) {
        auto inst = testing_support::random_instance(rng, 4, 6, false);
        const unsigned s = std::uniform_int_distribution<unsigned>(0, inst.topology.num_sources() - 1)(rng);
        inst.known = inst.topology.all_sources() - SourceSet::single(s);
        if (inst.receiver.is_source() && inst.receiver.index - 1 == s) continue;
        for (auto& h : inst.helpers) {
            h.decoding_set = SourceSet::single(s);
            h.helped_source = NodeId::source(s + 1);
        }
        const auto ctx = inst.context();
        const auto history = inst.history_without_candidate();
        CHECK(ir_mu_individual_outage(s, inst.candidate(), history, ctx) ==
              ir_su_individual_outage(s, inst.candidate(), history, ctx));
    }
}
