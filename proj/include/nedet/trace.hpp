#pragma once

// Line-delimited JSON trace: one object per presentation, keys sorted, so a
// given config and seed always produce the same bytes.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nedet/network.hpp"

namespace nedet {

enum class Phase { Train, Recall };

std::string_view to_string(Phase phase);

struct TraceRecord {
    Phase phase = Phase::Train;
    std::uint64_t epoch = 0;
    std::string pattern;
    std::string label;  // teacher class in training, expected class in recall
    std::optional<Address> teacher;
    std::optional<std::string> recalled;  // recall phase only
    PresentationStep step;

    bool operator==(const TraceRecord&) const = default;
};

nlohmann::json to_json(const Signal& signal);
Signal signal_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Event& event);
Event event_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PresentationStep& step);
PresentationStep step_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TraceRecord& record);
TraceRecord record_from_json(const nlohmann::json& j);

/// One line per record.
void emit_trace(std::span<const TraceRecord> records, std::ostream& out);
std::string trace_text(std::span<const TraceRecord> records);

/// Throws ParseError naming the offending line.
std::vector<TraceRecord> read_trace(std::istream& in);
std::vector<TraceRecord> load_trace(const std::filesystem::path& path);

/// Append-only trace file. Errors carry the path.
class TraceWriter {
public:
    explicit TraceWriter(std::filesystem::path path, bool append = false);

    void write(const TraceRecord& record);
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

}  // namespace nedet
