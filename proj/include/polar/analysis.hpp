#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "polar/decoder.hpp"
#include "polar/polar_code.hpp"

namespace polar {

// One aggregated (bit pattern, good pattern) row: N1 occurrences per block,
// M1 = splits per survivor without decision, M2 = with decision.
struct GroupPatternStats {
    std::string bit_pattern;   // m chars, '1' = information bit
    std::string good_pattern;  // m chars, '1' = good bit
    std::uint64_t n1 = 0;
    std::uint64_t m1 = 1;      // 2^#info
    std::uint64_t m2 = 1;      // 2^(#info - #good)
};

// split count s (power of two >= 2) -> number of group occurrences.
using SplitHistogram = std::map<std::uint64_t, std::uint64_t>;

enum class DecisionMode { Without, With };
enum class CostModel { Square, LogLinear };

// Scans the N/m groups of a code and aggregates identical pattern pairs.
// Rows come back sorted by (bit_pattern, good_pattern).
std::vector<GroupPatternStats> enumerate_group_patterns(const PolarCodeSpec& code,
                                                        unsigned group_width);

// Buckets N1 by M1 (Without) or M2 (With); single-path groups (s=1) drop out.
SplitHistogram split_histogram(const std::vector<GroupPatternStats>& stats,
                               DecisionMode mode);

// Square model: sum count(s) * s^2. LogLinear: sum count(s) * s * log2(s).
// list_multiplier scales the whole sum (default 1).
std::uint64_t sorting_cost(const SplitHistogram& hist, CostModel model,
                           std::uint64_t list_multiplier = 1);

// Observed splits from a live decode: per-group candidate count divided by
// the survivor count, s=1 dropped.
SplitHistogram runtime_split_histogram(const std::vector<GroupStats>& stats);

// CSV with header bit_pattern,good_pattern,N1[,M1,M2]; M1/M2 are recomputed
// from the patterns on load.
std::vector<GroupPatternStats> load_pattern_table(const std::filesystem::path& path);
std::vector<GroupPatternStats> read_pattern_table(std::istream& in);
void write_pattern_table(std::ostream& out, const std::vector<GroupPatternStats>& rows);

// CSV with header split,without_decision,with_decision, one row per split
// count: published appearance counts to audit a pattern table against.
struct SplitAppearanceRow {
    std::uint64_t split = 0;
    std::uint64_t without_decision = 0;
    std::uint64_t with_decision = 0;
};
std::vector<SplitAppearanceRow> load_split_appearances(const std::filesystem::path& path);

// Compares the histograms derived from pattern rows with published
// appearance counts and reports, per mismatch, which value reproduces the
// pattern rows' own cost totals. Returns the report text ("" if consistent).
std::string audit_split_appearances(const std::vector<GroupPatternStats>& rows,
                                    const std::vector<SplitAppearanceRow>& published);

std::string histogram_string(const SplitHistogram& hist);

}  // namespace polar
