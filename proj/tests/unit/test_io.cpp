#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nedet/checkpoint.hpp"
#include "nedet/config.hpp"
#include "nedet/patterns.hpp"
#include "nedet/trace.hpp"
#include "support.hpp"

using namespace nedet;
using nedet::testing::code_of;
using nedet::testing::u;
using nedet::testing::vec;

namespace fs = std::filesystem;

namespace {

constexpr const char* kTwoGlyphs = R"(# two glyphs
pattern A class=letter
..#..
.#.#.
#...#
.....
.....
end

pattern B
1 0 0 0 0.5
0 0 0 0 0
0 0 0 0 0
0 0 0 0 0
0 0 0 0 0.25
end
)";

fs::path temp_file(const std::string& name)
{
    return fs::temp_directory_path() / ("nedet_unit_" + name);
}

}  // namespace

TEST(Patterns, ParsesGlyphAndNumericRows)
{
    const auto set = parse_patterns(kTwoGlyphs);
    EXPECT_EQ(set.rows, 5u);
    EXPECT_EQ(set.cols, 5u);
    ASSERT_EQ(set.patterns.size(), 2u);
    EXPECT_EQ(set.patterns[0].label, "letter");
    EXPECT_EQ(set.patterns[1].label, "B");
    EXPECT_EQ(set.labels(), (std::vector<std::string>{"letter", "B"}));
    EXPECT_EQ(set.patterns[1].grid[0][4], 0.5);
}

TEST(Patterns, OnPixelsBecomeSignals)
{
    const auto set = parse_patterns(R"(pattern A
..#..
.#.#.
#...#
##.##
.....
end
)");
    const auto v = to_signals(set.patterns[0]);
    EXPECT_EQ(v.size(), 9u);
    EXPECT_TRUE(v.contains(u(2)));
    EXPECT_TRUE(v.contains(u(3 * 5 + 4)));
    EXPECT_EQ(v.level_at(u(2))->value(), 1.0);

    const auto shifted = to_signals(set.patterns[0], 100);
    EXPECT_TRUE(shifted.contains(u(102)));
}

TEST(Patterns, NumericLevelsCarryThrough)
{
    const auto v = to_signals(parse_patterns(kTwoGlyphs).patterns[1]);
    EXPECT_EQ(v, vec({{u(0), 1.0}, {u(4), 0.5}, {u(24), 0.25}}));
}

TEST(Patterns, EmptyFileIsParseError)
{
    EXPECT_EQ(code_of([] { parse_patterns(""); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_patterns("# only a comment\n"); }), ErrorCode::ParseError);
}

TEST(Patterns, RaggedRows)
{
    EXPECT_EQ(code_of([] { parse_patterns("pattern A\n..#\n.#\nend\n"); }), ErrorCode::DimensionMismatch);
    EXPECT_EQ(code_of([] { parse_patterns("pattern A\n..#\nend\npattern B\n..#\n..#\nend\n"); }),
              ErrorCode::DimensionMismatch);
}

TEST(Patterns, ReportsLineNumbers)
{
    try {
        parse_patterns("pattern A\n..#\n0.5 x 1\nend\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    EXPECT_EQ(code_of([] { parse_patterns("pattern A\n1.5\nend\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_patterns("pattern A\n..#\n"); }), ErrorCode::ParseError);
}

TEST(Patterns, MissingFile)
{
    EXPECT_EQ(code_of([] { load_patterns("/nonexistent/patterns.txt"); }), ErrorCode::Io);
}

TEST(Config, DefaultsAndOverrides)
{
    const auto config = config_from_json(nlohmann::json::parse(R"({"theta": 0.8, "epochs": 3})"));
    EXPECT_EQ(config.theta, 0.8);
    EXPECT_EQ(config.epochs, 3u);
    EXPECT_EQ(config.q, 0.7);
    EXPECT_EQ(config.module_sizes, std::vector<std::size_t>{64});
    EXPECT_EQ(config_from_json(to_json(config)), config);
}

TEST(Config, Rejections)
{
    auto bad = [](const char* text) {
        return code_of([&] { validate(config_from_json(nlohmann::json::parse(text))); });
    };
    EXPECT_EQ(bad(R"({"thetaa": 0.8})"), ErrorCode::InvalidConfig);
    EXPECT_EQ(bad(R"({"theta": 0})"), ErrorCode::InvalidConfig);
    EXPECT_EQ(bad(R"({"theta": 1.01})"), ErrorCode::InvalidConfig);
    EXPECT_EQ(bad(R"({"c": 1.0})"), ErrorCode::InvalidConfig);
    EXPECT_EQ(bad(R"({"q": 0})"), ErrorCode::InvalidConfig);
    EXPECT_EQ(bad(R"({"delta": 1.0})"), ErrorCode::InvalidConfig);
    EXPECT_EQ(bad(R"({"learning": "hebb"})"), ErrorCode::InvalidConfig);
    EXPECT_EQ(bad(R"({"module_sizes": [4, 0]})"), ErrorCode::InvalidConfig);
    EXPECT_EQ(bad(R"({"epochs": "five"})"), ErrorCode::InvalidConfig);
    EXPECT_EQ(bad(R"({"mode": "dream"})"), ErrorCode::InvalidConfig);
    EXPECT_EQ(bad(R"([1, 2])"), ErrorCode::InvalidConfig);
}

TEST(Config, NetworkMapping)
{
    ExperimentConfig config;
    config.learning = "self";
    config.c = 0.25;
    config.strict_gt = true;
    config.y_max = "fixed";
    config.y_max_value = 2.0;
    config.module_sizes = {3, 5};
    const auto net = config.network();
    EXPECT_EQ(std::get<SelfLearningMode>(net.learning).c, 0.25);
    EXPECT_EQ(net.rule, ComparisonRule::Greater);
    EXPECT_EQ(net.y_max_policy, YMaxPolicy::Fixed);
    EXPECT_EQ(net.y_max_fixed, 2.0);
    EXPECT_EQ(net.ps_module_sizes, (std::vector<std::size_t>{3, 5}));
}

TEST(Config, LoadFromFile)
{
    const auto path = temp_file("config.json");
    std::ofstream(path) << R"({"seed": 9, "shuffle": true})";
    const auto config = load_config(path);
    EXPECT_EQ(config.seed, 9u);
    EXPECT_TRUE(config.shuffle);
    std::ofstream(path) << "{ not json";
    EXPECT_EQ(code_of([&] { load_config(path); }), ErrorCode::ParseError);
    fs::remove(path);
    EXPECT_EQ(code_of([&] { load_config(path); }), ErrorCode::Io);
}

namespace {

NetworkState trained_network()
{
    NetworkConfig config;
    config.ps_module_sizes = {4, 3};
    NetworkState net = make_network(config);
    const Address la = add_label(net);
    const Address lb = add_label(net);
    present(net, vec({{u(1), 0.5}, {u(2), 0.75}}), la);
    present(net, vec({{u(1), 0.25}, {u(2), 0.75}}), la);
    present(net, vec({{u(5), 0.5}}), lb);
    present(net, vec({{u(5), 0.5}}), std::nullopt);
    return net;
}

}  // namespace

TEST(Trace, EmptyRunGivesEmptyStream)
{
    EXPECT_EQ(trace_text({}), "");
}

TEST(Trace, OneRecordPerStep)
{
    const auto net = trained_network();
    std::vector<TraceRecord> records;
    for (const auto& step : net.trace) {
        records.push_back({Phase::Train, 0, "p", "l", std::nullopt, std::nullopt, step});
    }
    const auto text = trace_text(records);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);

    std::istringstream in(text);
    const auto back = read_trace(in);
    ASSERT_EQ(back.size(), records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back[i].step, records[i].step);
    }
    EXPECT_EQ(trace_text(back), text);
}

TEST(Trace, MalformedLine)
{
    std::istringstream in("{\"phase\": \"train\"}\n");
    EXPECT_EQ(code_of([&] { read_trace(in); }), ErrorCode::ParseError);
}

TEST(Trace, WriterErrorsCarryThePath)
{
    try {
        TraceWriter writer("/nonexistent/dir/trace.jsonl");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
        EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/trace.jsonl"), std::string::npos);
    }
}

TEST(Trace, WriterAppends)
{
    const auto path = temp_file("trace.jsonl");
    TraceRecord r{Phase::Recall, 1, "p", "l", std::nullopt, std::string("l"), {}};
    {
        TraceWriter w(path);
        w.write(r);
    }
    {
        TraceWriter w(path, true);
        w.write(r);
    }
    EXPECT_EQ(load_trace(path).size(), 2u);
    fs::remove(path);
}

TEST(Checkpoint, NetworkRoundTrip)
{
    const auto net = trained_network();
    const auto text = to_json(net).dump();
    const auto back = network_from_json(nlohmann::json::parse(text));
    EXPECT_EQ(back, net);
    EXPECT_EQ(to_json(back).dump(), text);

    const auto without_trace = network_from_json(to_json(net, false));
    EXPECT_TRUE(without_trace.trace.empty());
    EXPECT_EQ(without_trace.ps_modules, net.ps_modules);
}

TEST(Checkpoint, RejectsBrokenDetector)
{
    auto j = to_json(trained_network());
    j["ps_modules"][0]["units"][0]["g_star"] = -1.0;
    EXPECT_EQ(code_of([&] { network_from_json(j); }), ErrorCode::ParseError);
    auto k = to_json(trained_network());
    k.erase("rs_module");
    EXPECT_EQ(code_of([&] { network_from_json(k); }), ErrorCode::ParseError);
}
