#include "coharq/scenario.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "coharq/parallel.hpp"

namespace coharq {

HarqConfig Scenario::config(ProtocolKind kind) const {
    const ProtocolParams& p = kind == ProtocolKind::Cc ? cc : ir;
    return {kind, p.alpha, p.max_rounds};
}

namespace {

// Source-to-relay/destination offsets below gamma for s1..s5.
constexpr double kSourceOffsetDb[] = {0.0, 4.0, 7.0, 9.0, 10.0};

// Source-to-source offsets. The s1..s3 block and s4-s5 are the published
// values; the s4/s5 links to s1..s3 are an assumed ladder inside [0, 9] dB
// that keeps the ordering "worse pair, larger offset".
constexpr double kSourcePairOffsetDb[5][5] = {
    {0.0, 1.0, 2.0, 3.0, 4.0},
    {1.0, 0.0, 5.0, 6.0, 7.0},
    {2.0, 5.0, 0.0, 8.0, 9.0},
    {3.0, 6.0, 8.0, 0.0, 9.5},
    {4.0, 7.0, 9.0, 9.5, 0.0},
};

constexpr unsigned kRelays = 3;

Scenario asymmetric(unsigned M) {
    const Topology topo(M, kRelays);
    auto builder = [topo](double gamma_db) {
        Cdi cdi(topo);
        const unsigned M = topo.num_sources();
        const NodeId d = NodeId::destination();
        for (unsigned s = 0; s < M; ++s) {
            const NodeId src = NodeId::source(s + 1);
            const double db = gamma_db - kSourceOffsetDb[s];
            cdi.set_db(src, d, db);
            for (unsigned r = 1; r <= kRelays; ++r) cdi.set_db(src, NodeId::relay(r), db);
            for (unsigned t = s + 1; t < M; ++t)
                cdi.set_db(src, NodeId::source(t + 1), gamma_db - kSourcePairOffsetDb[s][t]);
        }
        for (unsigned r = 1; r <= kRelays; ++r) {
            cdi.set_db(NodeId::relay(r), d, gamma_db);
            for (unsigned q = r + 1; q <= kRelays; ++q) cdi.set_db(NodeId::relay(r), NodeId::relay(q), gamma_db);
        }
        return cdi;
    };
    return {"asym-" + std::to_string(M) + "x3", topo, builder, {0.5, 4}, {1.0, 2}};
}

Scenario symmetric(unsigned M) {
    const Topology topo(M, kRelays);
    auto builder = [topo](double gamma_db) {
        Cdi cdi(topo);
        cdi.fill(db_to_linear(gamma_db));
        return cdi;
    };
    // T grows with M so that the ratio of first-phase slots to
    // retransmission slots stays roughly constant.
    const unsigned t_ir = M == 3 ? 4 : M == 4 ? 6 : 8;
    return {"sym-" + std::to_string(M), topo, builder, {0.5, t_ir}, {1.0, t_ir / 2}};
}

std::string lower(std::string_view s) {
    std::string out;
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

double asym_source_offset_db(unsigned s) { return kSourceOffsetDb[s]; }
double asym_source_pair_offset_db(unsigned a, unsigned b) { return kSourcePairOffsetDb[a][b]; }

std::vector<std::string> scenario_names() {
    return {"asym-3x3", "asym-4x3", "asym-5x3", "sym-3", "sym-4", "sym-5"};
}

Scenario scenario_by_name(std::string_view name) {
    const std::string key = lower(name);
    for (unsigned M = 3; M <= 5; ++M) {
        if (key == "asym-" + std::to_string(M) + "x3") return asymmetric(M);
        if (key == "sym-" + std::to_string(M)) return symmetric(M);
    }
    throw ConfigError("unknown scenario '" + std::string(name) +
                      "' (expected asym-3x3, asym-4x3, asym-5x3, sym-3, sym-4 or sym-5)");
}

AdaptationMode parse_adaptation(std::string_view name) {
    const std::string key = lower(name);
    if (key == "exhaustive") return AdaptationMode::Exhaustive;
    if (key == "ascent") return AdaptationMode::Ascent;
    throw ConfigError("unknown adaptation mode '" + std::string(name) + "' (expected exhaustive or ascent)");
}

std::string_view to_string(AdaptationMode mode) {
    return mode == AdaptationMode::Exhaustive ? "exhaustive" : "ascent";
}

HarqConfig effective_config(const Scenario& scenario, ProtocolKind kind, const SweepOptions& opts) {
    HarqConfig cfg = scenario.config(kind);
    if (opts.alpha_override) cfg.alpha = *opts.alpha_override;
    if (opts.t_override) cfg.max_rounds = *opts.t_override;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::uint64_t point_seed(std::uint64_t seed, double gamma_db) {
    return derive_seed(seed, std::bit_cast<std::uint64_t>(gamma_db + 0.0));
}
std::uint64_t adaptation_seed(std::uint64_t point) { return derive_seed(point, 0); }
std::uint64_t final_seed(std::uint64_t point) { return derive_seed(point, 1); }

SweepRow run_point(const Scenario& scenario, ProtocolKind kind, double gamma_db,
                   const SweepOptions& opts, unsigned workers) {
    const HarqConfig cfg = effective_config(scenario, kind, opts);
    const Cdi cdi = scenario.cdi(gamma_db);
    const std::uint64_t point = point_seed(opts.seed, gamma_db);

    RateAllocation allocation;
    if (opts.fixed_rates) {
        allocation.rates = *opts.fixed_rates;
    } else {
        const AdaptationOptions adapt{opts.adapt_frames, adaptation_seed(point), workers};
        const McsFamily mcs = McsFamily::standard();
        allocation = opts.adaptation == AdaptationMode::Exhaustive
                         ? exhaustive_search(cdi, cfg, mcs, adapt).allocation
                         : coordinate_ascent(cdi, cfg, mcs, adapt).allocation;
    }
    // The final estimate uses fresh frames so the reported eta is not biased
    // by the selection.
    MetricsEstimate metrics = estimate(cdi, allocation.rates, cfg, opts.frames, final_seed(point), workers);
    return {gamma_db, kind, std::move(allocation), std::move(metrics)};
}

std::vector<SweepRow> run_sweep(const Scenario& scenario, ProtocolKind kind, const SweepOptions& opts) {
    if (opts.gamma_db.empty()) throw ConfigError("empty gamma grid");
    effective_config(scenario, kind, opts);
    const std::size_t points = opts.gamma_db.size();
    const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, opts.workers), points));
    const unsigned inner = std::max(1u, opts.workers / outer);
    std::vector<SweepRow> rows(points);
    parallel_for(
        points, outer,
        [&](std::size_t i) { rows[i] = run_point(scenario, kind, opts.gamma_db[i], opts, inner); }, 1);
    return rows;
}

std::vector<double> gamma_grid(double start, double stop, double step) {
    if (!(step > 0.0)) throw ConfigError("gamma step must be > 0");
    if (stop < start) throw ConfigError("gamma stop must be >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
    return grid;
}

std::string csv_header(unsigned num_sources) {
    std::string h = "gamma_db,protocol,eta,se_eta,expected_t_used";
    for (unsigned s = 1; s <= num_sources; ++s) h += fmt::format(",rate_s{}", s);
    for (unsigned s = 1; s <= num_sources; ++s) h += fmt::format(",outage_s{}", s);
    return h;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, unsigned num_sources) {
    out << csv_header(num_sources) << '\n';
    for (const SweepRow& r : rows) {
        std::string line = fmt::format("{:.6g},{},{:.6g},{:.6g},{:.6g}", r.gamma_db, to_string(r.protocol),
                                       r.metrics.eta, r.metrics.eta_se, r.metrics.expected_t_used);
        for (double rate : r.allocation.rates) line += fmt::format(",{:.6g}", rate);
        for (double p : r.metrics.per_source_outage) line += fmt::format(",{:.6g}", p);
        out << line << '\n';
    }
}

std::vector<ProtocolKind> parse_protocol_list(std::string_view text) {
    if (lower(text) == "all") return {ProtocolKind::IrMu, ProtocolKind::IrSu, ProtocolKind::Cc};
    std::vector<ProtocolKind> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        try {
            out.push_back(parse_protocol(text.substr(pos, comma - pos)));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        pos = comma + 1;
    }
    return out;
}

SweepOptions SweepConfig::options() const {
    SweepOptions o;
    o.gamma_db = gamma_grid(gamma_db_start, gamma_db_stop, gamma_db_step);
    o.frames = frames;
    o.adapt_frames = adapt_frames;
    o.seed = seed;
    o.adaptation = adaptation;
    o.t_override = t_override;
    o.alpha_override = alpha_override;
    o.workers = workers;
    return o;
}

SweepConfig parse_sweep_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    SweepConfig cfg;
    if (root.IsNull()) return cfg;
    if (!root.IsMap()) throw ConfigError("config: expected a key/value mapping");

    for (const auto& kv : root) {
        const std::string key = kv.first.as<std::string>();
        const YAML::Node& v = kv.second;
        try {
            if (key == "scenario") cfg.scenario = v.as<std::string>();
            else if (key == "protocol") cfg.protocols = parse_protocol_list(v.as<std::string>());
            else if (key == "gamma_db_start") cfg.gamma_db_start = v.as<double>();
            else if (key == "gamma_db_stop") cfg.gamma_db_stop = v.as<double>();
            else if (key == "gamma_db_step") cfg.gamma_db_step = v.as<double>();
            else if (key == "frames") cfg.frames = v.as<std::size_t>();
            else if (key == "adapt_frames") cfg.adapt_frames = v.as<std::size_t>();
            else if (key == "seed") cfg.seed = v.as<std::uint64_t>();
            else if (key == "adaptation") cfg.adaptation = parse_adaptation(v.as<std::string>());
            else if (key == "t_override") cfg.t_override = v.as<unsigned>();
            else if (key == "alpha_override") cfg.alpha_override = v.as<double>();
            else if (key == "workers") cfg.workers = v.as<unsigned>();
            else throw ConfigError("config: unknown key '" + key + "'");
        } catch (const YAML::Exception& e) {
            throw ConfigError("config: bad value for '" + key + "': " + e.what());
        }
    }
    if (cfg.frames < 1 || cfg.adapt_frames < 1) throw ConfigError("config: frame counts must be >= 1");
    scenario_by_name(cfg.scenario);
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_sweep_config(text.str());
}

}  // namespace coharq
