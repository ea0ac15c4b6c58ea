#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coharq/adaptation.hpp"

namespace coharq {

struct ProtocolParams {
    double alpha;
    unsigned max_rounds;
};

/// A network preset: topology, the average-SNR layout as a function of the
/// reference SNR gamma (dB), and per-protocol (alpha, T).
struct Scenario {
    std::string name;
    Topology topology;
    std::function<Cdi(double gamma_db)> cdi_builder;
    ProtocolParams ir;
    ProtocolParams cc;

    Cdi cdi(double gamma_db) const { return cdi_builder(gamma_db); }
    HarqConfig config(ProtocolKind kind) const;
};

/// Presets: asym-3x3, asym-4x3, asym-5x3 (sources at decreasing quality,
/// three relays) and sym-3, sym-4, sym-5 (every link at gamma, T scaled
/// with the number of sources).
Scenario scenario_by_name(std::string_view name);
std::vector<std::string> scenario_names();

/// dB offsets below gamma used by the asymmetric presets.
/// Source-to-relay and source-to-destination offset of source s (0-based).
double asym_source_offset_db(unsigned s);
/// Source-to-source offset for the pair (a, b), 0-based, a != b.
double asym_source_pair_offset_db(unsigned a, unsigned b);

enum class AdaptationMode { Exhaustive, Ascent };
AdaptationMode parse_adaptation(std::string_view name);
std::string_view to_string(AdaptationMode mode);

struct SweepOptions {
    std::vector<double> gamma_db;
    /// Frames for the final estimate at the chosen allocation.
    std::size_t frames = 100'000;
    /// Frames per tuple during link adaptation.
    std::size_t adapt_frames = 10'000;
    std::uint64_t seed = 1;
    AdaptationMode adaptation = AdaptationMode::Exhaustive;
    std::optional<unsigned> t_override;
    std::optional<double> alpha_override;
    unsigned workers = 1;
    /// Rates used as-is instead of running link adaptation.
    std::optional<std::vector<double>> fixed_rates;
};

struct SweepRow {
    double gamma_db = 0.0;
    ProtocolKind protocol = ProtocolKind::IrMu;
    RateAllocation allocation;
    MetricsEstimate metrics;
};

/// Configuration actually used for `kind` once overrides are applied.
HarqConfig effective_config(const Scenario& scenario, ProtocolKind kind, const SweepOptions& opts);

/// Seeds for one sweep point. They depend on gamma itself, not its position
/// in the grid, so a point reproduces whatever grid it appears in.
std::uint64_t point_seed(std::uint64_t seed, double gamma_db);
std::uint64_t adaptation_seed(std::uint64_t point);
std::uint64_t final_seed(std::uint64_t point);

/// Adapts rates (unless fixed) and estimates one gamma point.
SweepRow run_point(const Scenario& scenario, ProtocolKind kind, double gamma_db,
                   const SweepOptions& opts, unsigned workers);

/// One row per gamma, in grid order.
std::vector<SweepRow> run_sweep(const Scenario& scenario, ProtocolKind kind, const SweepOptions& opts);

/// Inclusive arithmetic grid start, start+step, ..., <= stop.
std::vector<double> gamma_grid(double start, double stop, double step);

/// Header plus one line per row, 6 significant digits.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, unsigned num_sources);
std::string csv_header(unsigned num_sources);

/// Keys of the plain-text sweep configuration file.
struct SweepConfig {
    std::string scenario = "asym-3x3";
    std::vector<ProtocolKind> protocols{ProtocolKind::IrMu};
    double gamma_db_start = -15.0;
    double gamma_db_stop = 20.0;
    double gamma_db_step = 5.0;
    std::size_t frames = 100'000;
    std::size_t adapt_frames = 10'000;
    std::uint64_t seed = 1;
    AdaptationMode adaptation = AdaptationMode::Exhaustive;
    std::optional<unsigned> t_override;
    std::optional<double> alpha_override;
    unsigned workers = 1;

    SweepOptions options() const;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses a YAML mapping with the SweepConfig keys. Unknown keys are errors.
SweepConfig parse_sweep_config(std::string_view text);
SweepConfig load_sweep_config(const std::string& path);

/// "IR_MU,CC" or "all".
std::vector<ProtocolKind> parse_protocol_list(std::string_view text);

}  // namespace coharq
