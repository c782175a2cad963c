#pragma once

// Pattern files.
//
// Plain text, one block per pattern:
//
//     # comment
//     pattern A class=letter_a
//     ..#..
//     .#.#.
//     #####
//     #...#
//     #...#
//     end
//
// A row is either a glyph row made of '.' (0) and '#' (1) or whitespace
// separated intensities in [0, 1]. Lines starting with "# ", or with '#'
// outside a block, are comments. Every grid in a file has the same shape.
// Pixel (r, c) with intensity v > 0 becomes a signal from receptor
// (module 0, unit r * cols + c) with level v.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nedet/signals.hpp"

namespace nedet {

struct Pattern {
    std::string name;
    std::string label;  // class; defaults to the name
    std::vector<std::vector<double>> grid;

    bool operator==(const Pattern&) const = default;
};

struct PatternSet {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Pattern> patterns;

    /// Distinct labels in order of first appearance.
    std::vector<std::string> labels() const;
};

/// Throws ParseError (with line number) or DimensionMismatch.
PatternSet parse_patterns(std::string_view text);
PatternSet load_patterns(const std::filesystem::path& path);

/// `unit_offset` shifts every receptor address, which places patterns on
/// disjoint receptor fields.
SignalVector to_signals(const Pattern& pattern, std::uint32_t unit_offset = 0);

}  // namespace nedet
