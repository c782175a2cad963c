#include "nedet/patterns.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "nedet/error.hpp"
#include "nedet/network.hpp"

namespace nedet {

std::vector<std::string> PatternSet::labels() const
{
    std::vector<std::string> out;
    for (const auto& p : patterns) {
        if (std::find(out.begin(), out.end(), p.label) == out.end()) {
            out.push_back(p.label);
        }
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

[[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& what)
{
    throw Error(code, "line " + std::to_string(line) + ": " + what);
}

std::vector<double> parse_row(std::string_view row, std::size_t line)
{
    std::vector<double> values;
    if (row.find_first_not_of(".#") == std::string_view::npos) {
        for (char ch : row) {
            values.push_back(ch == '#' ? 1.0 : 0.0);
        }
        return values;
    }
    for (std::string_view token : split_ws(row)) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
            fail(ErrorCode::ParseError, line, "intensity '" + std::string(token) + "' is not a number");
        }
        if (!(v >= 0.0 && v <= 1.0)) {
            fail(ErrorCode::ParseError, line, "intensity " + std::string(token) + " outside [0, 1]");
        }
        values.push_back(v);
    }
    return values;
}

}  // namespace

PatternSet parse_patterns(std::string_view text)
{
    PatternSet set;
    Pattern current;
    bool open = false;
    std::size_t open_line = 0;
    std::size_t line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;

        if (line.empty() || line.starts_with("# ") || (!open && line.front() == '#')) {
            continue;
        }

        const auto tokens = split_ws(line);
        if (tokens.front() == "pattern") {
            if (open) fail(ErrorCode::ParseError, line_no, "pattern '" + current.name + "' lacks 'end'");
            if (tokens.size() < 2 || tokens.size() > 3) {
                fail(ErrorCode::ParseError, line_no, "expected 'pattern <name> [class=<label>]'");
            }
            current = Pattern{std::string(tokens[1]), std::string(tokens[1]), {}};
            if (tokens.size() == 3) {
                if (!tokens[2].starts_with("class=") || tokens[2].size() == 6) {
                    fail(ErrorCode::ParseError, line_no, "expected class=<label>, got '" +
                                                             std::string(tokens[2]) + "'");
                }
                current.label = std::string(tokens[2].substr(6));
            }
            open = true;
            open_line = line_no;
            continue;
        }
        if (!open) {
            fail(ErrorCode::ParseError, line_no, "row outside a pattern block");
        }
        if (line == "end") {
            if (current.grid.empty()) fail(ErrorCode::ParseError, line_no, "pattern '" + current.name + "' is empty");
            if (set.patterns.empty()) {
                set.rows = current.grid.size();
                set.cols = current.grid.front().size();
            } else if (current.grid.size() != set.rows || current.grid.front().size() != set.cols) {
                fail(ErrorCode::DimensionMismatch, line_no,
                     "pattern '" + current.name + "' is " + std::to_string(current.grid.size()) + "x" +
                         std::to_string(current.grid.front().size()) + ", expected " +
                         std::to_string(set.rows) + "x" + std::to_string(set.cols));
            }
            set.patterns.push_back(std::move(current));
            current = {};
            open = false;
            continue;
        }
        auto row = parse_row(line, line_no);
        if (!current.grid.empty() && row.size() != current.grid.front().size()) {
            fail(ErrorCode::DimensionMismatch, line_no,
                 "row has " + std::to_string(row.size()) + " columns, expected " +
                     std::to_string(current.grid.front().size()));
        }
        current.grid.push_back(std::move(row));
    }

    if (open) fail(ErrorCode::ParseError, open_line, "pattern '" + current.name + "' lacks 'end'");
    if (set.patterns.empty()) fail(ErrorCode::ParseError, line_no, "no patterns found");
    return set;
}

PatternSet load_patterns(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open patterns " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_patterns(buffer.str());
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.detail());
    }
}

SignalVector to_signals(const Pattern& pattern, std::uint32_t unit_offset)
{
    std::vector<std::pair<Address, Level>> pairs;
    for (std::size_t r = 0; r < pattern.grid.size(); ++r) {
        const auto& row = pattern.grid[r];
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (row[c] > 0.0) {
                const auto unit = static_cast<std::uint32_t>(r * row.size() + c) + unit_offset;
                pairs.emplace_back(Address{kReceptorModule, unit}, Level(row[c]));
            }
        }
    }
    return build_vector(pairs);
}

}  // namespace nedet
