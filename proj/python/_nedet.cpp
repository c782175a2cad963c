#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nedet/checkpoint.hpp"
#include "nedet/competition.hpp"
#include "nedet/config.hpp"
#include "nedet/detector.hpp"
#include "nedet/error.hpp"
#include "nedet/experiment.hpp"
#include "nedet/learning.hpp"
#include "nedet/network.hpp"
#include "nedet/patterns.hpp"
#include "nedet/trace.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

using Entries = std::vector<std::pair<nedet::Address, double>>;

nedet::SignalVector to_vector(const Entries& entries)
{
    std::vector<std::pair<nedet::Address, nedet::Level>> pairs;
    pairs.reserve(entries.size());
    for (const auto& [a, v] : entries) pairs.emplace_back(a, nedet::Level(v));
    return nedet::build_vector(pairs);
}

py::dict outcome_dict(const nedet::DetectorOutcome& outcome)
{
    py::dict d;
    if (std::holds_alternative<nedet::NoMatch>(outcome)) {
        d["kind"] = "no_match";
    } else if (const auto* s = std::get_if<nedet::SubThreshold>(&outcome)) {
        d["kind"] = "sub_threshold";
        d["delta_g"] = s->delta_g;
    } else {
        const auto& f = std::get<nedet::Fired>(outcome);
        d["kind"] = "fired";
        d["raw_level"] = f.raw_level;
        d["g_prime"] = f.g_prime;
        d["g_dprime"] = f.g_dprime;
        d["delta_g"] = f.delta_g;
    }
    return d;
}

nedet::ExperimentConfig config_from_text(const std::string& text)
{
    try {
        return nedet::config_from_json(text.empty() ? json::object() : json::parse(text));
    } catch (const json::parse_error& e) {
        throw nedet::Error(nedet::ErrorCode::ParseError, std::string("config: ") + e.what());
    }
}

/// Network plus its label names; the low-level counterpart of Experiment.
class Network {
public:
    explicit Network(const std::string& config_json)
        : net_(nedet::make_network(config_from_text(config_json).network()))
    {
    }

    nedet::Address add_label(const std::string& name)
    {
        const auto a = nedet::add_label(net_);
        labels_[a] = name;
        return a;
    }

    std::string present(const Entries& inputs, std::optional<nedet::Address> teacher)
    {
        return nedet::to_json(nedet::present(net_, to_vector(inputs), teacher)).dump();
    }

    std::optional<std::string> recall(const Entries& inputs) const
    {
        const auto z = nedet::recall(net_, to_vector(inputs));
        if (!z) return std::nullopt;
        auto it = labels_.find(*z);
        return it == labels_.end() ? nedet::to_string(*z) : it->second;
    }

    std::string recall_step(const Entries& inputs) const
    {
        return nedet::to_json(nedet::recall_step(net_, to_vector(inputs))).dump();
    }

    std::string state() const { return nedet::to_json(net_).dump(); }

private:
    nedet::NetworkState net_;
    std::map<nedet::Address, std::string> labels_;
};

}  // namespace

PYBIND11_MODULE(_nedet, m)
{
    m.doc() = "Detector networks with set-membership concepts and winner-take-all modules";

    static py::exception<nedet::Error> error(m, "NedetError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const nedet::Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
            exc.attr("code") = std::string(nedet::to_string(e.code()));
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    py::class_<nedet::Address>(m, "Address")
        .def(py::init<std::uint32_t, std::uint32_t>(), py::arg("module_id"), py::arg("unit_id"))
        .def_readwrite("module_id", &nedet::Address::module_id)
        .def_readwrite("unit_id", &nedet::Address::unit_id)
        .def_static("parse", &nedet::parse_address)
        .def("__str__", [](const nedet::Address& a) { return nedet::to_string(a); })
        .def("__repr__", [](const nedet::Address& a) { return "Address('" + nedet::to_string(a) + "')"; })
        .def("__eq__", [](const nedet::Address& a, const nedet::Address& b) { return a == b; })
        .def("__lt__", [](const nedet::Address& a, const nedet::Address& b) { return a < b; })
        .def("__hash__", [](const nedet::Address& a) {
            return std::hash<std::uint64_t>{}((std::uint64_t(a.module_id) << 32) | a.unit_id);
        });

    m.def("level_from_frequency", [](double hz) { return nedet::level_from_frequency(hz).value(); });
    m.def("frequency_from_level",
          [](double level) { return nedet::frequency_from_level(nedet::Level(level)); });

    py::enum_<nedet::ComparisonRule>(m, "ComparisonRule")
        .value("AT_LEAST", nedet::ComparisonRule::AtLeast)
        .value("GREATER", nedet::ComparisonRule::Greater);

    py::class_<nedet::LevelBand>(m, "LevelBand")
        .def(py::init([](double min, double opt, double max, std::uint64_t count) {
                 return nedet::LevelBand{min, opt, max, count};
             }),
             py::arg("min"), py::arg("opt"), py::arg("max"), py::arg("count") = 1)
        .def_readwrite("min", &nedet::LevelBand::min)
        .def_readwrite("opt", &nedet::LevelBand::opt)
        .def_readwrite("max", &nedet::LevelBand::max)
        .def_readwrite("count", &nedet::LevelBand::count);

    py::class_<nedet::DetectorCore>(m, "Detector")
        .def(py::init<>())
        .def_readwrite("own_address", &nedet::DetectorCore::own_address)
        .def_readwrite("receptive_field", &nedet::DetectorCore::receptive_field)
        .def_readwrite("concept", &nedet::DetectorCore::concept_set)
        .def_readwrite("bands", &nedet::DetectorCore::bands)
        .def_readwrite("g0", &nedet::DetectorCore::g0)
        .def_readwrite("g_star", &nedet::DetectorCore::g_star)
        .def_readwrite("y_max", &nedet::DetectorCore::y_max)
        .def_readwrite("rule", &nedet::DetectorCore::rule)
        .def("validate", [](const nedet::DetectorCore& d) { nedet::validate(d); })
        .def("step", [](const nedet::DetectorCore& d, const Entries& inputs) {
            return outcome_dict(nedet::detector_step(d, to_vector(inputs)));
        });

    m.def(
        "membership",
        [](std::uint64_t l, std::uint64_t k, const std::string& mode, double delta, double c, double q) {
            const nedet::Address a{0, 0};
            nedet::LearningMode lm = nedet::TeacherMode{delta};
            if (mode == "self") {
                lm = nedet::SelfLearningMode{c, q};
            } else if (mode != "teacher") {
                throw nedet::Error(nedet::ErrorCode::InvalidConfig, "mode: expected 'teacher' or 'self'");
            }
            nedet::validate(lm);
            const auto r = nedet::membership(nedet::MembershipTable::from_counts({{a, l}}, k, lm), a);
            return std::pair{r.w, r.in_concept};
        },
        py::arg("l"), py::arg("k"), py::arg("mode") = "teacher", py::arg("delta") = 0.0,
        py::arg("c") = 0.5, py::arg("q") = 0.7);

    m.def(
        "recompute_thresholds",
        [](const nedet::BandMap& bands, const std::set<nedet::Address>& concept_set, double theta) {
            const auto t = nedet::recompute_thresholds(bands, concept_set, nedet::CorridorParams{theta, 1e-6});
            return std::pair{t.g0, t.g_star};
        },
        py::arg("bands"), py::arg("concept"), py::arg("theta") = 0.9);

    m.def(
        "compete",
        [](const std::vector<std::pair<nedet::Address, double>>& field) {
            std::vector<nedet::Contestant> contestants;
            for (const auto& [a, raw] : field) contestants.push_back({a, raw});
            const auto r = nedet::compete(contestants);
            return std::pair{r.winner, r.losers};
        },
        py::arg("field"));

    m.def("normalize", [](double raw, double y_max) { return nedet::normalize(raw, y_max).value(); });

    py::class_<Network>(m, "Network")
        .def(py::init<const std::string&>(), py::arg("config_json") = "")
        .def("add_label", &Network::add_label, py::arg("name"))
        .def("present", &Network::present, py::arg("inputs"), py::arg("teacher") = std::nullopt)
        .def("recall", &Network::recall, py::arg("inputs"))
        .def("recall_step", &Network::recall_step, py::arg("inputs"))
        .def("state", &Network::state);

    py::class_<nedet::PatternSet>(m, "PatternSet")
        .def_readonly("rows", &nedet::PatternSet::rows)
        .def_readonly("cols", &nedet::PatternSet::cols)
        .def("labels", &nedet::PatternSet::labels)
        .def("names", [](const nedet::PatternSet& s) {
            std::vector<std::string> out;
            for (const auto& p : s.patterns) out.push_back(p.name);
            return out;
        })
        .def("signals", [](const nedet::PatternSet& s, std::size_t index, std::uint32_t offset) {
            Entries out;
            for (const auto& [a, level] : nedet::to_signals(s.patterns.at(index), offset)) {
                out.emplace_back(a, level.value());
            }
            return out;
        }, py::arg("index"), py::arg("offset") = 0)
        .def("__len__", [](const nedet::PatternSet& s) { return s.patterns.size(); });

    m.def("parse_patterns", [](const std::string& text) { return nedet::parse_patterns(text); });
    m.def("load_patterns", [](const std::string& path) { return nedet::load_patterns(path); });

    m.def(
        "normalize_config",
        [](const std::string& config_json) {
            auto config = config_from_text(config_json);
            nedet::validate(config);
            return nedet::to_json(config).dump();
        },
        py::arg("config_json") = "");

    py::class_<nedet::Experiment>(m, "Experiment")
        .def(py::init([](const std::string& config_json, nedet::PatternSet patterns) {
                 return nedet::Experiment(config_from_text(config_json), std::move(patterns));
             }),
             py::arg("config_json"), py::arg("patterns"))
        .def_static("restore", [](const std::string& checkpoint, nedet::PatternSet patterns) {
            return nedet::Experiment::restore(json::parse(checkpoint), std::move(patterns));
        })
        .def("done", &nedet::Experiment::done)
        .def("step", [](nedet::Experiment& e) { return nedet::to_json(e.step()).dump(); })
        .def("run", &nedet::Experiment::run, py::arg("max_steps") = SIZE_MAX)
        .def("report", [](const nedet::Experiment& e) { return e.report().to_json().dump(); })
        .def("checkpoint", [](const nedet::Experiment& e) { return e.checkpoint().dump(); })
        .def("trace", [](const nedet::Experiment& e) { return nedet::trace_text(e.records()); });

    m.def("report_from_trace", [](const std::string& text) {
        std::istringstream in(text);
        const auto records = nedet::read_trace(in);
        return nedet::report_from_trace(records).to_json().dump();
    });
}
