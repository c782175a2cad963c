// nedet: train, recall and inspect detector networks on pattern files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "criteria.hpp"
#include "nedet/checkpoint.hpp"
#include "nedet/config.hpp"
#include "nedet/error.hpp"
#include "nedet/experiment.hpp"
#include "nedet/patterns.hpp"
#include "nedet/trace.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Options {
    std::string config;
    std::string patterns;
    std::string checkpoint;
    std::string trace;
    std::string resume;
    std::string report;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> stop_after;
    std::optional<int> criterion;
    bool strict_gt = false;
};

json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw nedet::Error(nedet::ErrorCode::Io, "cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw nedet::Error(nedet::ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

void write_json(const fs::path& path, const json& j)
{
    std::ofstream out(path);
    out << j.dump(2) << '\n';
    if (!out) {
        throw nedet::Error(nedet::ErrorCode::Io, "cannot write " + path.string());
    }
}

nedet::ExperimentConfig resolve_config(const Options& opt, nedet::RunMode mode,
                                       std::optional<nedet::ExperimentConfig> base = std::nullopt)
{
    nedet::ExperimentConfig config = base.value_or(nedet::ExperimentConfig{});
    if (!opt.config.empty()) {
        config = nedet::load_config(opt.config);
    }
    if (opt.seed) config.seed = *opt.seed;
    if (opt.strict_gt) config.strict_gt = true;
    config.mode = mode;
    nedet::validate(config);
    return config;
}

void require(const std::string& value, const char* flag)
{
    if (value.empty()) {
        throw nedet::Error(nedet::ErrorCode::InvalidConfig, std::string(flag) + " is required");
    }
}

/// Streams records to --trace, replaying any records already held.
void attach_trace(nedet::Experiment& exp, const Options& opt,
                  std::optional<nedet::TraceWriter>& writer)
{
    if (opt.trace.empty()) return;
    writer.emplace(opt.trace);
    for (const auto& r : exp.records()) writer->write(r);
    exp.on_record([&writer](const nedet::TraceRecord& r) { writer->write(r); });
}

void finish(const nedet::Experiment& exp, const Options& opt)
{
    const json report = exp.report().to_json();
    if (!opt.report.empty()) write_json(opt.report, report);
    std::cout << report.dump(2) << '\n';
}

int cmd_train(const Options& opt)
{
    require(opt.patterns, "--patterns");
    auto patterns = nedet::load_patterns(opt.patterns);

    std::optional<nedet::Experiment> exp;
    if (!opt.resume.empty()) {
        exp.emplace(nedet::Experiment::restore(read_json(opt.resume), std::move(patterns)));
    } else {
        exp.emplace(resolve_config(opt, nedet::RunMode::Train), std::move(patterns));
    }

    std::optional<nedet::TraceWriter> writer;
    attach_trace(*exp, opt, writer);
    exp->run(opt.stop_after.value_or(SIZE_MAX));

    if (!opt.checkpoint.empty()) write_json(opt.checkpoint, exp->checkpoint());
    if (!exp->done()) {
        std::cerr << "stopped after " << exp->records().size() << " presentations\n";
        return kExitOk;
    }
    finish(*exp, opt);
    return kExitOk;
}

int cmd_recall(const Options& opt)
{
    require(opt.patterns, "--patterns");
    auto patterns = nedet::load_patterns(opt.patterns);

    std::optional<nedet::Experiment> exp;
    if (opt.checkpoint.empty()) {
        // An untrained network: every pattern is novel, nothing is recalled.
        exp.emplace(resolve_config(opt, nedet::RunMode::Recall), std::move(patterns));
    } else {
        const json ckpt = read_json(opt.checkpoint);
        try {
            auto config = resolve_config(opt, nedet::RunMode::Recall,
                                         nedet::config_from_json(ckpt.at("config")));
            std::map<std::string, nedet::Address> labels;
            for (const auto& [name, a] : ckpt.at("labels").items()) {
                labels[name] = nedet::parse_address(a.get<std::string>());
            }
            exp.emplace(std::move(config), std::move(patterns),
                        nedet::network_from_json(ckpt.at("network")), std::move(labels));
        } catch (const json::exception& e) {
            throw nedet::Error(nedet::ErrorCode::ParseError, opt.checkpoint + ": " + e.what());
        }
    }

    std::optional<nedet::TraceWriter> writer;
    attach_trace(*exp, opt, writer);
    exp->run();
    finish(*exp, opt);
    return kExitOk;
}

json describe_network(const json& ckpt)
{
    const auto net = nedet::network_from_json(ckpt.at("network"));
    std::map<nedet::Address, std::string> names;
    for (const auto& [name, a] : ckpt.at("labels").items()) {
        names[nedet::parse_address(a.get<std::string>())] = name;
    }

    json modules = json::array();
    for (const auto& module : net.ps_modules) {
        json detectors = json::array();
        for (const auto& unit : module.units) {
            if (unit.life.state == nedet::LifecycleState::Free) continue;
            json concept_list = json::array();
            for (const auto& a : unit.core.concept_set) concept_list.push_back(nedet::to_string(a));
            json d{{"address", nedet::to_string(unit.core.own_address)},
                   {"state", std::string(nedet::to_string(unit.life.state))},
                   {"label", nullptr},
                   {"concept", concept_list},
                   {"field_size", unit.core.receptive_field.size()},
                   {"cycles", unit.table.cycles()},
                   {"g0", unit.core.g0},
                   {"g_star", unit.core.g_star},
                   {"y_max", unit.core.y_max}};
            if (unit.life.teacher) d["label"] = names.at(*unit.life.teacher);
            detectors.push_back(std::move(d));
        }
        modules.push_back(json{{"module", module.module_id},
                               {"size", module.units.size()},
                               {"free", module.free_count()},
                               {"detectors", detectors}});
    }
    return json{{"cursor", ckpt.at("cursor")},
                {"config", ckpt.at("config")},
                {"labels", ckpt.at("labels")},
                {"cycles", net.next_cycle},
                {"modules", modules}};
}

int cmd_inspect(const Options& opt)
{
    json out;
    if (!opt.checkpoint.empty()) {
        const json ckpt = read_json(opt.checkpoint);
        try {
            out = describe_network(ckpt);
        } catch (const json::exception& e) {
            throw nedet::Error(nedet::ErrorCode::ParseError, opt.checkpoint + ": " + e.what());
        }
    } else {
        if (opt.config.empty() && opt.patterns.empty()) {
            throw nedet::Error(nedet::ErrorCode::InvalidConfig,
                               "inspect needs --checkpoint, --config or --patterns");
        }
        out["config"] = nedet::to_json(resolve_config(opt, nedet::RunMode::Inspect));
        if (!opt.patterns.empty()) {
            const auto set = nedet::load_patterns(opt.patterns);
            json list = json::array();
            for (const auto& p : set.patterns) {
                list.push_back(json{{"name", p.name},
                                    {"label", p.label},
                                    {"signals", nedet::to_signals(p).size()}});
            }
            out["patterns"] = json{{"rows", set.rows},
                                   {"cols", set.cols},
                                   {"labels", set.labels()},
                                   {"items", list}};
        }
    }
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_trace(const Options& opt)
{
    require(opt.trace, "--trace");
    const auto records = nedet::load_trace(opt.trace);
    const json report = nedet::report_from_trace(records).to_json();
    if (!opt.report.empty()) write_json(opt.report, report);
    std::cout << report.dump(2) << '\n';
    return kExitOk;
}

int cmd_selftest(const Options& opt)
{
    const auto results = nedet::acceptance::run_all(opt.criterion);
    if (results.empty()) {
        throw nedet::Error(nedet::ErrorCode::InvalidConfig, "no such criterion");
    }
    return nedet::acceptance::print_results(results, std::cout) == 0 ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Presentation-paradigm detector networks"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&opt](CLI::App* cmd) {
        cmd->add_option("--config", opt.config, "Experiment config (JSON)");
        cmd->add_option("--patterns", opt.patterns, "Pattern file");
        cmd->add_option("--checkpoint", opt.checkpoint, "Checkpoint file");
        cmd->add_option("--trace", opt.trace, "Trace file (JSON lines)");
        cmd->add_option("--seed", opt.seed, "Override the config seed");
        cmd->add_flag("--strict-gt", opt.strict_gt, "Fire only when g0 + g' > g*");
    };

    auto* train = app.add_subcommand("train", "Train on a pattern set, then recall it");
    add_common(train);
    train->add_option("--resume", opt.resume, "Continue from a checkpoint");
    train->add_option("--stop-after", opt.stop_after, "Stop after N presentations");
    train->add_option("--report", opt.report, "Also write the report here");

    auto* recall = app.add_subcommand("recall", "Recall a pattern set on a trained checkpoint");
    add_common(recall);
    recall->add_option("--report", opt.report, "Also write the report here");

    auto* inspect = app.add_subcommand("inspect", "Describe a checkpoint, config or pattern file");
    add_common(inspect);

    auto* trace = app.add_subcommand("trace", "Rebuild the report from a trace file");
    add_common(trace);
    trace->add_option("--report", opt.report, "Also write the report here");

    auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
    selftest->add_option("--criterion", opt.criterion, "Run a single criterion")
        ->check(CLI::Range(1, 10));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (train->parsed()) return cmd_train(opt);
        if (recall->parsed()) return cmd_recall(opt);
        if (inspect->parsed()) return cmd_inspect(opt);
        if (trace->parsed()) return cmd_trace(opt);
        return cmd_selftest(opt);
    } catch (const nedet::Error& e) {
        std::cerr << "nedet: " << e.what() << '\n';
        return nedet::is_validation_error(e.code()) ? kExitValidation : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "nedet: " << e.what() << '\n';
        return kExitRuntime;
    }
}
