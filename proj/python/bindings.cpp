#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <stdexcept>
#include <string>

#include "coharq/adaptation.hpp"
#include "coharq/scenario.hpp"

namespace py = pybind11;
using namespace coharq;

namespace {

// "s1", "r2", "d"
NodeId parse_node(const std::string& text) {
    if (text == "d") return NodeId::destination();
    if (text.size() >= 2 && (text[0] == 's' || text[0] == 'r')) {
        std::size_t used = 0;
        const unsigned long i = std::stoul(text.substr(1), &used);
        if (used == text.size() - 1 && i >= 1)
            return text[0] == 's' ? NodeId::source(static_cast<unsigned>(i))
                                  : NodeId::relay(static_cast<unsigned>(i));
    }
    throw std::invalid_argument("bad node name '" + text + "' (expected sN, rN or d)");
}

std::vector<unsigned> members(SourceSet s) {
    std::vector<unsigned> out;
    s.for_each([&](unsigned i) { out.push_back(i + 1); });
    return out;
}

HarqConfig make_config(const std::string& protocol, double alpha, unsigned max_rounds) {
    HarqConfig cfg{parse_protocol(protocol), alpha, max_rounds};
    cfg.validate();
    return cfg;
}

py::dict trace_to_dict(const FrameTrace& tr) {
    py::list rounds;
    for (std::size_t t = 0; t < tr.choices.size(); ++t) {
        py::dict r;
        r["node"] = tr.choices[t].node.to_string();
        r["helped_source"] =
            tr.choices[t].helped_source ? py::cast(tr.choices[t].helped_source->to_string()) : py::none();
        r["destination_set"] = members(tr.states[t + 1].destination_set());
        rounds.append(r);
    }
    py::dict out;
    out["after_first_phase"] = members(tr.states.front().destination_set());
    out["rounds"] = rounds;
    out["t_used"] = tr.result.t_used;
    out["final_destination_set"] = members(tr.result.final_destination_set);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cooperative multi-source HARQ simulator";

    py::register_exception<SearchBudgetExceeded>(m, "SearchBudgetExceeded", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("mutual_information", &mutual_information, py::arg("squared_gain"));
    m.def("db_to_linear", &db_to_linear, py::arg("db"));

    py::class_<Topology>(m, "Topology")
        .def(py::init<unsigned, unsigned>(), py::arg("num_sources"), py::arg("num_relays"))
        .def_property_readonly("num_sources", &Topology::num_sources)
        .def_property_readonly("num_relays", &Topology::num_relays)
        .def_property_readonly("num_nodes", &Topology::num_nodes);

    py::class_<Cdi>(m, "Cdi")
        .def(py::init<Topology>(), py::arg("topology"))
        .def_property_readonly("topology", &Cdi::topology)
        .def("set", [](Cdi& c, const std::string& a, const std::string& b,
                       double g) { c.set(parse_node(a), parse_node(b), g); },
             py::arg("a"), py::arg("b"), py::arg("gamma_linear"))
        .def("set_db", [](Cdi& c, const std::string& a, const std::string& b,
                          double g) { c.set_db(parse_node(a), parse_node(b), g); },
             py::arg("a"), py::arg("b"), py::arg("gamma_db"))
        .def("fill", &Cdi::fill, py::arg("gamma_linear"))
        .def("gamma", [](const Cdi& c, const std::string& a,
                         const std::string& b) { return c.gamma(parse_node(a), parse_node(b)); });

    py::class_<HarqConfig>(m, "HarqConfig")
        .def(py::init(&make_config), py::arg("protocol"), py::arg("alpha"), py::arg("max_rounds"))
        .def_property_readonly("protocol", [](const HarqConfig& c) { return std::string(to_string(c.protocol)); })
        .def_readonly("alpha", &HarqConfig::alpha)
        .def_readonly("max_rounds", &HarqConfig::max_rounds);

    py::class_<MetricsEstimate>(m, "MetricsEstimate")
        .def_readonly("per_source_outage", &MetricsEstimate::per_source_outage)
        .def_readonly("per_source_outage_se", &MetricsEstimate::per_source_outage_se)
        .def_readonly("expected_t_used", &MetricsEstimate::expected_t_used)
        .def_readonly("expected_t_used_se", &MetricsEstimate::expected_t_used_se)
        .def_readonly("long_term_rates", &MetricsEstimate::long_term_rates)
        .def_readonly("eta", &MetricsEstimate::eta)
        .def_readonly("eta_se", &MetricsEstimate::eta_se)
        .def_readonly("frames", &MetricsEstimate::frames);

    py::class_<AdaptationResult>(m, "AdaptationResult")
        .def_property_readonly("rates", [](const AdaptationResult& r) { return r.allocation.rates; })
        .def_readonly("metrics", &AdaptationResult::metrics)
        .def_readonly("evaluations", &AdaptationResult::evaluations);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readonly("topology", &Scenario::topology)
        .def("cdi", &Scenario::cdi, py::arg("gamma_db"))
        .def("config", [](const Scenario& s, const std::string& p) { return s.config(parse_protocol(p)); },
             py::arg("protocol"));

    m.def("scenario", &scenario_by_name, py::arg("name"));
    m.def("scenario_names", &scenario_names);

    m.def("simulate_frame",
          [](const Cdi& cdi, const std::vector<double>& rates, const HarqConfig& cfg, std::uint64_t seed,
             std::uint64_t frame) { return trace_to_dict(trace_frame(cdi, rates, cfg, seed, frame)); },
          py::arg("cdi"), py::arg("rates"), py::arg("config"), py::arg("seed"), py::arg("frame"),
          "Runs one frame and returns its round-by-round trace.");

    m.def("estimate",
          [](const Cdi& cdi, const std::vector<double>& rates, const HarqConfig& cfg, std::size_t frames,
             std::uint64_t seed, unsigned workers) {
              py::gil_scoped_release nogil;
              return estimate(cdi, rates, cfg, frames, seed, workers);
          },
          py::arg("cdi"), py::arg("rates"), py::arg("config"), py::arg("frames"), py::arg("seed") = 1,
          py::arg("workers") = 1);

    m.def("t_used_distribution",
          [](const Cdi& cdi, const std::vector<double>& rates, const HarqConfig& cfg, std::size_t frames,
             std::uint64_t seed) {
              py::gil_scoped_release nogil;
              return t_used_distribution(cdi, rates, cfg, frames, seed);
          },
          py::arg("cdi"), py::arg("rates"), py::arg("config"), py::arg("frames"), py::arg("seed") = 1);

    auto adapt = [](auto search) {
        return [search](const Cdi& cdi, const HarqConfig& cfg, std::vector<double> mcs, std::size_t frames,
                        std::uint64_t seed, unsigned workers) {
            const McsFamily family = mcs.empty() ? McsFamily::standard() : McsFamily(std::move(mcs));
            AdaptationOptions opts;
            opts.frames = frames;
            opts.seed = seed;
            opts.workers = workers;
            py::gil_scoped_release nogil;
            return search(cdi, cfg, family, opts);
        };
    };
    m.def("exhaustive_search", adapt(&exhaustive_search), py::arg("cdi"), py::arg("config"),
          py::arg("mcs") = std::vector<double>{}, py::arg("frames") = 10'000, py::arg("seed") = 1,
          py::arg("workers") = 1);
    m.def("coordinate_ascent", adapt(&coordinate_ascent), py::arg("cdi"), py::arg("config"),
          py::arg("mcs") = std::vector<double>{}, py::arg("frames") = 10'000, py::arg("seed") = 1,
          py::arg("workers") = 1);

    m.def("sweep_csv",
          [](const std::string& scenario, const std::string& protocol, std::vector<double> gamma_db,
             std::size_t frames, std::size_t adapt_frames, std::uint64_t seed, const std::string& adaptation,
             std::optional<unsigned> t_override, std::optional<double> alpha_override, unsigned workers) {
              const Scenario sc = scenario_by_name(scenario);
              SweepOptions opts;
              opts.gamma_db = std::move(gamma_db);
              opts.frames = frames;
              opts.adapt_frames = adapt_frames;
              opts.seed = seed;
              opts.adaptation = parse_adaptation(adaptation);
              opts.t_override = t_override;
              opts.alpha_override = alpha_override;
              opts.workers = workers;
              std::ostringstream out;
              {
                  py::gil_scoped_release nogil;
                  std::vector<SweepRow> rows;
                  for (ProtocolKind k : parse_protocol_list(protocol)) {
                      auto part = run_sweep(sc, k, opts);
                      rows.insert(rows.end(), part.begin(), part.end());
                  }
                  write_csv(out, rows, sc.topology.num_sources());
              }
              return out.str();
          },
          py::arg("scenario"), py::arg("protocol"), py::arg("gamma_db"), py::arg("frames") = 100'000,
          py::arg("adapt_frames") = 10'000, py::arg("seed") = 1, py::arg("adaptation") = "exhaustive",
          py::arg("t_override") = py::none(), py::arg("alpha_override") = py::none(), py::arg("workers") = 1,
          "Runs a sweep (protocol may be a comma list or 'all') and returns the CSV text.");
}
