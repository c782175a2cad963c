#include "nedet/trace.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "nedet/error.hpp"

namespace nedet {

using nlohmann::json;

std::string_view to_string(Phase phase)
{
    return phase == Phase::Train ? "train" : "recall";
}

namespace {

Phase parse_phase(const std::string& text)
{
    if (text == "train") return Phase::Train;
    if (text == "recall") return Phase::Recall;
    throw Error(ErrorCode::ParseError, "unknown phase '" + text + "'");
}

json optional_address(const std::optional<Address>& a)
{
    return a ? json(to_string(*a)) : json(nullptr);
}

std::optional<Address> address_or_null(const json& j)
{
    if (j.is_null()) return std::nullopt;
    return parse_address(j.get<std::string>());
}

}  // namespace

json to_json(const Signal& signal)
{
    return json{{"address", to_string(signal.address)}, {"level", signal.level.value()}};
}

Signal signal_from_json(const json& j)
{
    return Signal{parse_address(j.at("address").get<std::string>()), Level(j.at("level").get<double>())};
}

json to_json(const Event& event)
{
    json j{{"kind", std::string(to_string(event.kind))},
           {"module", event.module_id},
           {"subject", optional_address(event.subject)},
           {"partner", optional_address(event.partner)}};
    if (event.kind == EventKind::Captured || event.kind == EventKind::Corrected) {
        j["concept_size"] = event.concept_size;
        j["g0"] = event.g0;
        j["g_star"] = event.g_star;
    }
    return j;
}

Event event_from_json(const json& j)
{
    Event e;
    e.kind = parse_event_kind(j.at("kind").get<std::string>());
    e.module_id = j.at("module").get<std::uint32_t>();
    e.subject = address_or_null(j.at("subject"));
    e.partner = address_or_null(j.at("partner"));
    if (j.contains("concept_size")) {
        e.concept_size = j.at("concept_size").get<std::size_t>();
        e.g0 = j.at("g0").get<double>();
        e.g_star = j.at("g_star").get<double>();
    }
    return e;
}

json to_json(const PresentationStep& step)
{
    json winners = json::object();
    for (const auto& [module, signal] : step.winners) {
        winners[std::to_string(module)] = to_json(signal);
    }
    json events = json::array();
    for (const auto& e : step.events) {
        events.push_back(to_json(e));
    }
    return json{{"cycle", step.cycle}, {"winners", winners}, {"events", events}};
}

PresentationStep step_from_json(const json& j)
{
    PresentationStep step;
    step.cycle = j.at("cycle").get<std::uint64_t>();
    for (const auto& [module, signal] : j.at("winners").items()) {
        step.winners[static_cast<std::uint32_t>(std::stoul(module))] = signal_from_json(signal);
    }
    for (const auto& e : j.at("events")) {
        step.events.push_back(event_from_json(e));
    }
    return step;
}

json to_json(const TraceRecord& record)
{
    json j = to_json(record.step);
    j["phase"] = std::string(to_string(record.phase));
    j["epoch"] = record.epoch;
    j["pattern"] = record.pattern;
    j["label"] = record.label;
    j["teacher"] = optional_address(record.teacher);
    j["recalled"] = record.recalled ? json(*record.recalled) : json(nullptr);
    return j;
}

TraceRecord record_from_json(const json& j)
{
    TraceRecord r;
    r.phase = parse_phase(j.at("phase").get<std::string>());
    r.epoch = j.at("epoch").get<std::uint64_t>();
    r.pattern = j.at("pattern").get<std::string>();
    r.label = j.at("label").get<std::string>();
    r.teacher = address_or_null(j.at("teacher"));
    if (!j.at("recalled").is_null()) {
        r.recalled = j.at("recalled").get<std::string>();
    }
    r.step = step_from_json(j);
    return r;
}

void emit_trace(std::span<const TraceRecord> records, std::ostream& out)
{
    for (const auto& r : records) {
        out << to_json(r).dump() << '\n';
    }
}

std::string trace_text(std::span<const TraceRecord> records)
{
    std::ostringstream out;
    emit_trace(records, out);
    return out.str();
}

std::vector<TraceRecord> read_trace(std::istream& in)
{
    std::vector<TraceRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, "trace line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw Error(ErrorCode::ParseError, "trace line " + std::to_string(line_no) + ": " + e.detail());
        }
    }
    return records;
}

std::vector<TraceRecord> load_trace(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open trace " + path.string());
    }
    try {
        return read_trace(in);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.detail());
    }
}

TraceWriter::TraceWriter(std::filesystem::path path, bool append)
    : path_(std::move(path))
    , out_(path_, append ? std::ios::app : std::ios::trunc)
{
    if (!out_) {
        throw Error(ErrorCode::Io, "cannot open trace " + path_.string() + " for writing");
    }
}

void TraceWriter::write(const TraceRecord& record)
{
    out_ << to_json(record).dump() << '\n';
    out_.flush();
    if (!out_) {
        throw Error(ErrorCode::Io, "write to " + path_.string() + " failed");
    }
}

}  // namespace nedet
