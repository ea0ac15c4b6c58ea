// Command line driver: gamma sweeps, single-point link adaptation, frame
// traces and retransmission-count histograms.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "coharq/scenario.hpp"

using namespace coharq;

namespace {

struct CommonFlags {
    std::optional<std::string> config;
    std::optional<std::string> scenario;
    std::optional<std::string> protocol;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> frames;
    std::optional<std::size_t> adapt_frames;
    std::optional<std::string> adaptation;
    std::optional<unsigned> t_override;
    std::optional<double> alpha_override;
    std::optional<unsigned> workers;
    std::optional<std::string> rates;

    void attach(CLI::App* app) {
        app->add_option("-c,--config", config, "Sweep configuration file (YAML key: value)");
        app->add_option("-s,--scenario", scenario, "asym-3x3, asym-4x3, asym-5x3, sym-3, sym-4, sym-5");
        app->add_option("-p,--protocol", protocol, "IR_MU, IR_SU, CC, a comma list, or all");
        app->add_option("--seed", seed, "Master seed");
        app->add_option("--frames", frames, "Frames for the final estimate");
        app->add_option("--adapt-frames", adapt_frames, "Frames per rate tuple during adaptation");
        app->add_option("--adaptation", adaptation, "exhaustive or ascent");
        app->add_option("--t-override", t_override, "Override the number of retransmission rounds T");
        app->add_option("--alpha-override", alpha_override, "Override alpha = N2/N1");
        app->add_option("-j,--workers", workers, "Worker threads");
        app->add_option("--rates", rates, "Fixed per-source rates, e.g. 2,1.5,1 (skips adaptation)");
    }

    // Config file first, then flags on top.
    SweepConfig resolve() const {
        SweepConfig cfg = config ? load_sweep_config(*config) : SweepConfig{};
        if (scenario) cfg.scenario = *scenario;
        if (protocol) cfg.protocols = parse_protocol_list(*protocol);
        if (seed) cfg.seed = *seed;
        if (frames) cfg.frames = *frames;
        if (adapt_frames) cfg.adapt_frames = *adapt_frames;
        if (adaptation) cfg.adaptation = parse_adaptation(*adaptation);
        if (t_override) cfg.t_override = *t_override;
        if (alpha_override) cfg.alpha_override = *alpha_override;
        if (workers) cfg.workers = *workers;
        if (cfg.frames < 1 || cfg.adapt_frames < 1) throw ConfigError("frame counts must be >= 1");
        return cfg;
    }

    std::optional<std::vector<double>> fixed_rates(unsigned num_sources) const {
        if (!rates) return std::nullopt;
        std::vector<double> out;
        std::stringstream in(*rates);
        for (std::string item; std::getline(in, item, ',');) {
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ConfigError("bad rate '" + item + "'");
            }
        }
        if (out.size() != num_sources)
            throw ConfigError(fmt::format("--rates needs {} values, got {}", num_sources, out.size()));
        return out;
    }
};

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt::format("{:.6g}", v[i]);
    return s;
}

ProtocolKind single_protocol(const SweepConfig& cfg) {
    if (cfg.protocols.size() != 1) throw ConfigError("this command takes exactly one protocol");
    return cfg.protocols.front();
}

int cmd_sweep(const CommonFlags& flags, std::optional<double> start, std::optional<double> stop,
              std::optional<double> step, const std::string& output) {
    SweepConfig cfg = flags.resolve();
    if (start) cfg.gamma_db_start = *start;
    if (stop) cfg.gamma_db_stop = *stop;
    if (step) cfg.gamma_db_step = *step;
    const Scenario scenario = scenario_by_name(cfg.scenario);
    SweepOptions opts = cfg.options();
    opts.fixed_rates = flags.fixed_rates(scenario.topology.num_sources());

    std::vector<SweepRow> rows;
    for (ProtocolKind kind : cfg.protocols) {
        auto part = run_sweep(scenario, kind, opts);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    if (output.empty() || output == "-") {
        write_csv(std::cout, rows, scenario.topology.num_sources());
    } else {
        std::ofstream out(output);
        if (!out) throw ConfigError("cannot write '" + output + "'");
        write_csv(out, rows, scenario.topology.num_sources());
    }
    return 0;
}

int cmd_adapt(const CommonFlags& flags, double gamma_db) {
    const SweepConfig cfg = flags.resolve();
    const Scenario scenario = scenario_by_name(cfg.scenario);
    SweepOptions opts = cfg.options();
    for (ProtocolKind kind : cfg.protocols) {
        const SweepRow row = run_point(scenario, kind, gamma_db, opts, cfg.workers);
        const MetricsEstimate& m = row.metrics;
        fmt::print("scenario={} protocol={} gamma_db={:.6g} adaptation={}\n", scenario.name,
                   to_string(kind), gamma_db, to_string(cfg.adaptation));
        fmt::print("  rates         = {}\n", join(row.allocation.rates));
        fmt::print("  eta           = {:.6g} (se {:.3g})\n", m.eta, m.eta_se);
        fmt::print("  E[T_used]     = {:.6g} (se {:.3g})\n", m.expected_t_used, m.expected_t_used_se);
        fmt::print("  outage        = {}\n", join(m.per_source_outage));
        fmt::print("  long-term R   = {}\n", join(m.long_term_rates));
    }
    return 0;
}

std::vector<double> rates_for_point(const CommonFlags& flags, const SweepConfig& cfg, const Scenario& scenario,
                                    ProtocolKind kind, double gamma_db) {
    if (auto fixed = flags.fixed_rates(scenario.topology.num_sources())) return *fixed;
    SweepOptions opts = cfg.options();
    opts.frames = 1;
    return run_point(scenario, kind, gamma_db, opts, cfg.workers).allocation.rates;
}

int cmd_trace(const CommonFlags& flags, double gamma_db, std::uint64_t frame) {
    const SweepConfig cfg = flags.resolve();
    const Scenario scenario = scenario_by_name(cfg.scenario);
    const ProtocolKind kind = single_protocol(cfg);
    SweepOptions opts = cfg.options();
    const HarqConfig hcfg = effective_config(scenario, kind, opts);
    const std::vector<double> rates = rates_for_point(flags, cfg, scenario, kind, gamma_db);
    const FrameTrace trace =
        trace_frame(scenario.cdi(gamma_db), rates, hcfg, final_seed(point_seed(cfg.seed, gamma_db)), frame);

    const Topology& topo = scenario.topology;
    fmt::print("scenario={} protocol={} gamma_db={:.6g} frame={} alpha={} T={}\n", scenario.name,
               to_string(kind), gamma_db, frame, hcfg.alpha, hcfg.max_rounds);
    fmt::print("rates = {}\n", join(rates));
    fmt::print("link gains |h|^2 (row = transmitter):\n");
    for (unsigned a = 0; a < topo.num_transmitters(); ++a) {
        std::string line = fmt::format("  {:>3}:", topo.node(a).to_string());
        for (unsigned b = 0; b < topo.num_nodes(); ++b)
            line += a == b ? fmt::format(" {:>10}", "-")
                           : fmt::format(" {}={:<8.4g}", topo.node(b).to_string(), trace.realization.gain(a, b));
        fmt::print("{}\n", line);
    }
    for (std::size_t t = 0; t < trace.states.size(); ++t) {
        if (t == 0) {
            fmt::print("round 0 (first phase)\n");
        } else {
            const RoundChoice& c = trace.choices[t - 1];
            fmt::print("round {}: {} transmits{}\n", t, c.node.to_string(),
                       c.helped_source ? " for " + c.helped_source->to_string() : std::string(" (all decoded)"));
        }
        for (unsigned n = 0; n < topo.num_nodes(); ++n)
            fmt::print("  {:>3} decoded {}\n", topo.node(n).to_string(), trace.states[t].decoding_sets[n].to_string());
    }
    fmt::print("t_used={} destination={}\n", trace.result.t_used, trace.result.final_destination_set.to_string());
    return 0;
}

int cmd_dist(const CommonFlags& flags, double gamma_db) {
    const SweepConfig cfg = flags.resolve();
    const Scenario scenario = scenario_by_name(cfg.scenario);
    const ProtocolKind kind = single_protocol(cfg);
    const HarqConfig hcfg = effective_config(scenario, kind, cfg.options());
    const std::vector<double> rates = rates_for_point(flags, cfg, scenario, kind, gamma_db);
    const auto hist = t_used_distribution(scenario.cdi(gamma_db), rates, hcfg, cfg.frames,
                                          final_seed(point_seed(cfg.seed, gamma_db)), cfg.workers);
    fmt::print("t_used,count,probability\n");
    for (std::size_t t = 0; t < hist.size(); ++t)
        fmt::print("{},{},{:.6g}\n", t, hist[t], static_cast<double>(hist[t]) / static_cast<double>(cfg.frames));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte-Carlo outage simulator for cooperative HARQ in multi-source multi-relay networks"};
    app.require_subcommand(1);

    CommonFlags sweep_flags, adapt_flags, trace_flags, dist_flags;
    std::optional<double> g_start, g_stop, g_step;
    std::string output;
    double adapt_gamma = 10.0, trace_gamma = 10.0, dist_gamma = 10.0;
    std::uint64_t trace_frame_index = 0;

    auto* sweep = app.add_subcommand("sweep", "Sweep gamma and emit one CSV row per (gamma, protocol)");
    sweep_flags.attach(sweep);
    sweep->add_option("--gamma-start", g_start, "First gamma (dB)");
    sweep->add_option("--gamma-stop", g_stop, "Last gamma (dB), inclusive");
    sweep->add_option("--gamma-step", g_step, "Gamma step (dB)");
    sweep->add_option("-o,--output", output, "CSV path, '-' or empty for stdout");

    auto* adapt = app.add_subcommand("adapt", "Print the chosen rate allocation at one gamma");
    adapt_flags.attach(adapt);
    adapt->add_option("-g,--gamma", adapt_gamma, "Gamma (dB)");

    auto* trace = app.add_subcommand("frame-trace", "Dump one frame round by round");
    trace_flags.attach(trace);
    trace->add_option("-g,--gamma", trace_gamma, "Gamma (dB)");
    trace->add_option("-f,--frame", trace_frame_index, "Frame index");

    auto* dist = app.add_subcommand("dist", "Histogram of retransmission rounds used");
    dist_flags.attach(dist);
    dist->add_option("-g,--gamma", dist_gamma, "Gamma (dB)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return cmd_sweep(sweep_flags, g_start, g_stop, g_step, output);
        if (adapt->parsed()) return cmd_adapt(adapt_flags, adapt_gamma);
        if (trace->parsed()) return cmd_trace(trace_flags, trace_gamma, trace_frame_index);
        if (dist->parsed()) return cmd_dist(dist_flags, dist_gamma);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
