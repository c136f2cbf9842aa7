#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polar/bits.hpp"
#include "polar/crc.hpp"
#include "polar/polar_code.hpp"

namespace polar {

enum class MetricMode { Exact, MinApprox };

struct DecoderConfig {
    std::size_t list_size = 1;      // L
    std::size_t group_width = 1;    // m, power of two dividing N
    double good_fraction = 0.0;     // used when planning the good set
    bool decision_enabled = false;
    bool adaptive = false;
    std::size_t max_list_size = 32; // L_max for the adaptive schedule
    MetricMode metric_mode = MetricMode::Exact;

    void validate(const PolarCodeSpec& code) const;
};

// One candidate extension of a survival path by one m-bit group.
struct GroupCandidate {
    std::uint32_t parent = 0;   // index into the current path list
    std::uint32_t pattern = 0;  // m bits, bit (m-1-j) = leaf k*m+j
    double delta = 0.0;         // log-domain penalty increment
    double total = 0.0;         // parent metric + delta
};

// Per-group extension bookkeeping: how many paths were alive and how many
// candidates the sorter saw.
struct GroupStats {
    std::uint32_t survivors = 0;
    std::uint64_t candidates = 0;
};

// SC soft values and partial sums sufficient to resume decoding at the next
// group. Levels are subtree-size exponents: the group node sits at level mu,
// the root (channel) at level n. alpha holds levels [mu, n-1] contiguously,
// beta_left the stored left-child partial sums for levels [mu+1, n].
struct ScState {
    std::vector<double> alpha;
    BitVec beta_left;
};

struct DecoderPath {
    BitVec history;      // decided u bits, natural order, filled per group
    double metric = 0.0; // accumulated log-domain penalty
    ScState state;
};

struct DecodedPath {
    BitVec info_bits;  // K decided bits at the information indices, ascending
    double metric = 0.0;
};

struct DecodeResult {
    std::vector<DecodedPath> paths;       // sorted by metric, best first
    std::vector<GroupStats> group_stats;  // one entry per group
};

// Penalty of deciding bit b against soft value alpha.
double bit_penalty(double alpha, std::uint8_t bit, MetricMode mode);

// Candidate metrics for one group given the m soft values at its subtree
// node. info_mask/good_mask use the same bit order as GroupCandidate::pattern.
// Without decision: all 2^popcount(info_mask) admissible patterns. With
// decision: one candidate per bad-bit pattern, the best good completion.
std::vector<GroupCandidate> candidates_for_group_llrs(std::span<const double> alpha,
                                                      std::uint32_t info_mask,
                                                      std::uint32_t good_mask,
                                                      bool decision, MetricMode mode,
                                                      std::uint32_t parent = 0,
                                                      double parent_metric = 0.0);

// Group-at-a-time SC-List decoder: extends every survival path by m bits per
// step, prunes once per group. The decision-aided mode splits only at bad
// bits, hard-deciding the good ones.
class GroupListDecoder {
public:
    GroupListDecoder(const PolarCodeSpec& code, const DecoderConfig& config);

    DecodeResult decode(std::span<const double> llrs);

    // Stepwise interface used by decode(); public so tests can drive single
    // groups and inspect intermediate lists.
    void start(std::span<const double> llrs);
    std::vector<GroupCandidate> group_candidate_metrics(std::size_t path_index,
                                                        std::size_t group);
    std::vector<GroupCandidate> extend_full(std::size_t group);
    std::vector<GroupCandidate> extend_decision_aided(std::size_t group);
    void prune_top_l(std::vector<GroupCandidate> candidates, std::size_t group);

    std::size_t group_count() const { return group_count_; }
    const std::vector<DecoderPath>& paths() const { return paths_; }
    const std::vector<GroupStats>& group_stats() const { return stats_; }
    DecodeResult finish() const;

private:
    void compute_group_llrs(DecoderPath& path, std::size_t group);
    void propagate_partial_sums(DecoderPath& path, std::size_t group,
                                std::uint32_t pattern);
    std::uint32_t group_info_mask(std::size_t group) const;
    std::uint32_t group_good_mask(std::size_t group) const;

    const PolarCodeSpec& code_;
    DecoderConfig config_;
    unsigned mu_ = 0;             // log2(group width)
    std::size_t group_count_ = 0;
    std::vector<double> root_llrs_;  // natural order, shared by all paths
    std::vector<DecoderPath> paths_;
    std::vector<GroupStats> stats_;
    std::vector<std::size_t> alpha_offset_;  // per level
    std::vector<std::size_t> beta_offset_;   // per level
    std::size_t alpha_size_ = 0;
    std::size_t beta_size_ = 0;
};

DecodeResult decode(std::span<const double> llrs, const PolarCodeSpec& code,
                    const DecoderConfig& config);

// Classic bit-at-a-time SC-List decoder, kept as an independent reference
// path; decode() with m=1 and decision off must match it bit for bit.
DecodeResult decode_serial(std::span<const double> llrs, const PolarCodeSpec& code,
                           const DecoderConfig& config);

struct PathSelection {
    std::size_t path_index = 0;
    bool crc_pass = false;
};

// Lowest-metric CRC-passing path; if none passes, the lowest-metric path
// with crc_pass = false.
PathSelection select_output_path(const DecodeResult& result, const CrcSpec& crc);

struct AdaptiveResult {
    BitVec info_bits;
    bool crc_pass = false;
    std::vector<std::size_t> list_sizes_tried;
    DecodeResult last;  // result of the final attempt
};

// CRC-gated retry ladder L = 1, 2, 4, ..., L_max.
AdaptiveResult adaptive_decode(std::span<const double> llrs, const PolarCodeSpec& code,
                               const DecoderConfig& config, const CrcSpec& crc);

}  // namespace polar
