#pragma once

// Experiment driver: trains a network on a pattern set for a number of
// epochs, then recalls every pattern once. Each presentation becomes one
// trace record; the final report can be rebuilt from the trace alone.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nedet/config.hpp"
#include "nedet/network.hpp"
#include "nedet/patterns.hpp"
#include "nedet/trace.hpp"

namespace nedet {

struct ClassRecall {
    std::size_t correct = 0;
    std::size_t total = 0;

    bool operator==(const ClassRecall&) const = default;
};

struct DetectorSummary {
    Address address;
    LifecycleState state = LifecycleState::Free;
    std::optional<std::string> label;
    std::size_t concept_size = 0;
    double g0 = 0.0;
    double g_star = 0.0;

    bool operator==(const DetectorSummary&) const = default;
};

struct Report {
    std::map<std::string, ClassRecall> per_class;
    std::size_t recall_correct = 0;
    std::size_t recall_total = 0;
    std::size_t recall_winners = 0;
    std::size_t captures = 0;
    std::size_t conflicts = 0;
    std::size_t corrections = 0;
    std::size_t novelty = 0;
    std::vector<DetectorSummary> detectors;  // every non-free PS detector, address order

    std::size_t bound_detectors() const;
    nlohmann::json to_json() const;

    bool operator==(const Report&) const = default;
};

/// Rebuilds the report from trace records only.
Report report_from_trace(std::span<const TraceRecord> records);

class Experiment {
public:
    /// Fresh network; one RS label per pattern class in first-appearance order.
    Experiment(ExperimentConfig config, PatternSet patterns);
    /// Continues from an existing network (e.g. recall on a trained checkpoint).
    Experiment(ExperimentConfig config, PatternSet patterns, NetworkState network,
               std::map<std::string, Address> labels);

    bool done() const noexcept { return phase_ == Stage::Done; }
    /// Presents one pattern and returns its trace record.
    const TraceRecord& step();
    /// Steps until done or `max_steps` presentations have run.
    void run(std::size_t max_steps = SIZE_MAX);

    Report report() const;

    const std::vector<TraceRecord>& records() const noexcept { return records_; }
    const NetworkState& network() const noexcept { return network_; }
    const ExperimentConfig& config() const noexcept { return config_; }
    const std::map<std::string, Address>& labels() const noexcept { return labels_; }

    /// Called for every new record, e.g. to stream the trace to disk.
    void on_record(std::function<void(const TraceRecord&)> sink) { sink_ = std::move(sink); }

    nlohmann::json checkpoint() const;
    /// Throws ParseError, or InvalidConfig when the patterns do not match.
    static Experiment restore(const nlohmann::json& checkpoint, PatternSet patterns);

private:
    enum class Stage { Train, Recall, Done };

    void settle();
    std::vector<std::size_t> epoch_order(std::size_t epoch) const;
    std::optional<std::string> label_name(Address address) const;

    ExperimentConfig config_;
    PatternSet patterns_;
    NetworkState network_;
    std::map<std::string, Address> labels_;
    std::vector<SignalVector> stimuli_;
    Stage phase_ = Stage::Train;
    std::size_t epoch_ = 0;
    std::size_t index_ = 0;
    std::vector<TraceRecord> records_;
    std::function<void(const TraceRecord&)> sink_;
};

/// Builds, runs and reports in one call. Propagates NoFreeDetector.
Report run_experiment(const ExperimentConfig& config, const PatternSet& patterns);

}  // namespace nedet
