#include "nedet/experiment.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "nedet/checkpoint.hpp"
#include "nedet/error.hpp"

namespace nedet {

using nlohmann::json;

std::size_t Report::bound_detectors() const
{
    return static_cast<std::size_t>(std::count_if(detectors.begin(), detectors.end(), [](const auto& d) {
        return d.state == LifecycleState::Bound;
    }));
}

json Report::to_json() const
{
    json classes = json::object();
    for (const auto& [label, r] : per_class) {
        classes[label] = json{{"correct", r.correct}, {"total", r.total}};
    }
    json dets = json::array();
    for (const auto& d : detectors) {
        dets.push_back(json{{"address", to_string(d.address)},
                            {"state", std::string(nedet::to_string(d.state))},
                            {"label", d.label ? json(*d.label) : json(nullptr)},
                            {"concept_size", d.concept_size},
                            {"g0", d.g0},
                            {"g_star", d.g_star}});
    }
    return json{{"per_class", classes},
                {"recall_correct", recall_correct},
                {"recall_total", recall_total},
                {"recall_winners", recall_winners},
                {"captures", captures},
                {"conflicts", conflicts},
                {"corrections", corrections},
                {"novelty", novelty},
                {"bound_detectors", bound_detectors()},
                {"detectors", dets}};
}

namespace {

// Counters shared by both report routes; they only ever read the trace.
void tally(Report& report, std::span<const TraceRecord> records)
{
    for (const auto& r : records) {
        for (const auto& e : r.step.events) {
            switch (e.kind) {
            case EventKind::Captured: ++report.captures; break;
            case EventKind::Conflict: ++report.conflicts; break;
            case EventKind::Corrected: ++report.corrections; break;
            case EventKind::NoveltyFired: ++report.novelty; break;
            default: break;
            }
        }
        if (r.phase != Phase::Recall) {
            continue;
        }
        auto& cls = report.per_class[r.label];
        ++cls.total;
        ++report.recall_total;
        if (!r.step.winners.empty()) {
            ++report.recall_winners;
        }
        if (r.recalled == r.label) {
            ++cls.correct;
            ++report.recall_correct;
        }
    }
}

}  // namespace

Report report_from_trace(std::span<const TraceRecord> records)
{
    Report report;
    tally(report, records);

    std::map<Address, std::string> label_names;
    for (const auto& r : records) {
        if (r.teacher) {
            label_names.emplace(*r.teacher, r.label);
        }
    }
    std::map<Address, DetectorSummary> detectors;
    for (const auto& r : records) {
        for (const auto& e : r.step.events) {
            if (!e.subject) continue;
            switch (e.kind) {
            case EventKind::Captured:
            case EventKind::Corrected: {
                auto& d = detectors[*e.subject];
                d.address = *e.subject;
                if (e.kind == EventKind::Captured) {
                    d.state = LifecycleState::Identifier;
                    d.label.reset();
                }
                d.concept_size = e.concept_size;
                d.g0 = e.g0;
                d.g_star = e.g_star;
                break;
            }
            case EventKind::Bound: {
                auto& d = detectors[*e.subject];
                d.state = LifecycleState::Bound;
                if (e.partner) {
                    auto it = label_names.find(*e.partner);
                    d.label = it != label_names.end() ? std::optional(it->second) : std::nullopt;
                }
                break;
            }
            default:
                break;
            }
        }
    }
    for (auto& [address, d] : detectors) {
        report.detectors.push_back(std::move(d));
    }
    return report;
}

Experiment::Experiment(ExperimentConfig config, PatternSet patterns)
    : config_(std::move(config))
    , patterns_(std::move(patterns))
{
    validate(config_);
    network_ = make_network(config_.network());
    for (const auto& label : patterns_.labels()) {
        labels_[label] = add_label(network_);
    }
    for (const auto& p : patterns_.patterns) {
        stimuli_.push_back(to_signals(p));
    }
    phase_ = config_.mode == RunMode::Train    ? Stage::Train
             : config_.mode == RunMode::Recall ? Stage::Recall
                                               : Stage::Done;
    settle();
}

Experiment::Experiment(ExperimentConfig config, PatternSet patterns, NetworkState network,
                       std::map<std::string, Address> labels)
    : config_(std::move(config))
    , patterns_(std::move(patterns))
    , network_(std::move(network))
    , labels_(std::move(labels))
{
    validate(config_);
    for (const auto& label : patterns_.labels()) {
        if (!labels_.contains(label)) {
            labels_[label] = add_label(network_);
        }
    }
    for (const auto& p : patterns_.patterns) {
        stimuli_.push_back(to_signals(p));
    }
    phase_ = config_.mode == RunMode::Train    ? Stage::Train
             : config_.mode == RunMode::Recall ? Stage::Recall
                                               : Stage::Done;
    settle();
}

void Experiment::settle()
{
    const std::size_t n = stimuli_.size();
    if (phase_ == Stage::Train && (epoch_ >= config_.epochs || n == 0)) {
        phase_ = Stage::Recall;
        epoch_ = config_.epochs;
        index_ = 0;
    }
    if (phase_ == Stage::Recall && index_ >= n) {
        phase_ = Stage::Done;
    }
}

std::vector<std::size_t> Experiment::epoch_order(std::size_t epoch) const
{
    std::vector<std::size_t> order(stimuli_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (!config_.shuffle) {
        return order;
    }
    // Fisher-Yates over mt19937_64, whose output sequence is fixed by the
    // standard; std::shuffle's is not.
    std::mt19937_64 rng(config_.seed ^ (0x9E3779B97F4A7C15ULL * (epoch + 1)));
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng() % i]);
    }
    return order;
}

std::optional<std::string> Experiment::label_name(Address address) const
{
    for (const auto& [name, a] : labels_) {
        if (a == address) {
            return name;
        }
    }
    return std::nullopt;
}

const TraceRecord& Experiment::step()
{
    if (done()) {
        throw Error(ErrorCode::InvalidConfig, "experiment already finished");
    }
    TraceRecord record;
    if (phase_ == Stage::Train) {
        const std::size_t p = epoch_order(epoch_)[index_];
        const Pattern& pattern = patterns_.patterns[p];
        record.phase = Phase::Train;
        record.epoch = epoch_;
        record.pattern = pattern.name;
        record.label = pattern.label;
        record.teacher = labels_.at(pattern.label);
        record.step = present(network_, stimuli_[p], record.teacher);
        if (++index_ == stimuli_.size()) {
            index_ = 0;
            ++epoch_;
        }
    } else {
        const Pattern& pattern = patterns_.patterns[index_];
        record.phase = Phase::Recall;
        record.epoch = epoch_;
        record.pattern = pattern.name;
        record.label = pattern.label;
        record.step = recall_step(network_, stimuli_[index_]);
        if (auto z = recall(network_, stimuli_[index_])) {
            record.recalled = label_name(*z);
        }
        ++index_;
    }
    settle();
    records_.push_back(std::move(record));
    if (sink_) {
        sink_(records_.back());
    }
    return records_.back();
}

void Experiment::run(std::size_t max_steps)
{
    for (std::size_t i = 0; i < max_steps && !done(); ++i) {
        step();
    }
}

Report Experiment::report() const
{
    Report report;
    tally(report, records_);
    for (const auto& module : network_.ps_modules) {
        for (const auto& unit : module.units) {
            if (unit.life.state == LifecycleState::Free) continue;
            DetectorSummary d;
            d.address = unit.core.own_address;
            d.state = unit.life.state;
            if (unit.life.teacher) {
                d.label = label_name(*unit.life.teacher);
            }
            d.concept_size = unit.core.concept_set.size();
            d.g0 = unit.core.g0;
            d.g_star = unit.core.g_star;
            report.detectors.push_back(std::move(d));
        }
    }
    return report;
}

namespace {

std::string stage_name(int stage)
{
    return stage == 0 ? "train" : stage == 1 ? "recall" : "done";
}

}  // namespace

json Experiment::checkpoint() const
{
    json labels = json::object();
    for (const auto& [name, a] : labels_) {
        labels[name] = to_string(a);
    }
    json names = json::array();
    for (const auto& p : patterns_.patterns) {
        names.push_back(p.name);
    }
    json records = json::array();
    for (const auto& r : records_) {
        records.push_back(to_json(r));
    }
    return json{{"format", "nedet-checkpoint"},
                {"version", 1},
                {"config", nedet::to_json(config_)},
                {"labels", labels},
                {"patterns", names},
                {"cursor", json{{"stage", stage_name(static_cast<int>(phase_))},
                                {"epoch", epoch_},
                                {"index", index_}}},
                {"network", nedet::to_json(network_, false)},
                {"records", records}};
}

Experiment Experiment::restore(const json& checkpoint, PatternSet patterns)
{
    try {
        if (checkpoint.at("format") != "nedet-checkpoint" || checkpoint.at("version") != 1) {
            throw Error(ErrorCode::ParseError, "not a version 1 checkpoint");
        }
        const auto names = checkpoint.at("patterns").get<std::vector<std::string>>();
        if (names.size() != patterns.patterns.size()) {
            throw Error(ErrorCode::InvalidConfig, "checkpoint was taken on a different pattern set");
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] != patterns.patterns[i].name) {
                throw Error(ErrorCode::InvalidConfig, "checkpoint was taken on a different pattern set");
            }
        }
        std::map<std::string, Address> labels;
        for (const auto& [name, a] : checkpoint.at("labels").items()) {
            labels[name] = parse_address(a.get<std::string>());
        }
        NetworkState network = network_from_json(checkpoint.at("network"));
        std::vector<TraceRecord> records;
        for (const auto& r : checkpoint.at("records")) {
            records.push_back(record_from_json(r));
            if (records.back().phase == Phase::Train) {
                network.trace.push_back(records.back().step);
            }
        }

        Experiment e(config_from_json(checkpoint.at("config")), std::move(patterns), std::move(network),
                     std::move(labels));
        const auto& cursor = checkpoint.at("cursor");
        const auto stage = cursor.at("stage").get<std::string>();
        e.phase_ = stage == "train" ? Stage::Train : stage == "recall" ? Stage::Recall : Stage::Done;
        e.epoch_ = cursor.at("epoch").get<std::size_t>();
        e.index_ = cursor.at("index").get<std::size_t>();
        e.records_ = std::move(records);
        e.settle();
        return e;
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::ParseError, std::string("checkpoint: ") + ex.what());
    }
}

Report run_experiment(const ExperimentConfig& config, const PatternSet& patterns)
{
    Experiment experiment(config, patterns);
    experiment.run();
    return experiment.report();
}

}  // namespace nedet
