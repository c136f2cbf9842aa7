#include "polar/decoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace polar {

namespace {

// ln(1 + e^-s) evaluated without overflow.
inline double softplus_neg(double s) {
    return std::max(-s, 0.0) + std::log1p(std::exp(-std::abs(s)));
}

inline double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Check-node combine of two LLRs.
inline double f_combine(double a, double b, MetricMode mode) {
    double mag = std::min(std::abs(a), std::abs(b));
    double s = sign_of(a) * sign_of(b);
    if (mode == MetricMode::MinApprox) return s * mag;
    double sum = std::abs(a) + std::abs(b);
    double diff = std::abs(std::abs(a) - std::abs(b));
    return s * mag + std::log1p(std::exp(-sum)) - std::log1p(std::exp(-diff));
}

// Variable-node combine given the left partial sum.
inline double g_combine(double a, double b, std::uint8_t u) {
    return u ? b - a : b + a;
}

inline std::uint64_t checked_shift(unsigned bits) { return std::uint64_t{1} << bits; }

}  // namespace

double bit_penalty(double alpha, std::uint8_t bit, MetricMode mode) {
    double s = bit ? -alpha : alpha;
    if (mode == MetricMode::MinApprox) return s < 0.0 ? -s : 0.0;
    return softplus_neg(s);
}

void DecoderConfig::validate(const PolarCodeSpec& code) const {
    if (list_size < 1) throw std::invalid_argument("list size must be >= 1");
    if (!is_power_of_two(group_width) || group_width > 32)
        throw std::invalid_argument("group width must be a power of two <= 32");
    if (code.block_length % group_width != 0)
        throw std::invalid_argument("group width must divide the block length");
    if (adaptive && max_list_size < list_size)
        throw std::invalid_argument("max list size must be >= list size");
    if (good_fraction < 0.0 || good_fraction > 1.0)
        throw std::invalid_argument("good fraction must lie in [0,1]");
}

std::vector<GroupCandidate> candidates_for_group_llrs(std::span<const double> alpha,
                                                      std::uint32_t info_mask,
                                                      std::uint32_t good_mask,
                                                      bool decision, MetricMode mode,
                                                      std::uint32_t parent,
                                                      double parent_metric) {
    const unsigned m = static_cast<unsigned>(alpha.size());
    if (!is_power_of_two(m) || m > 32)
        throw std::invalid_argument("group size must be a power of two <= 32");
    if ((good_mask & ~info_mask) != 0)
        throw std::invalid_argument("good mask marks a non-information bit");

    const unsigned info_bits = static_cast<unsigned>(std::popcount(info_mask));
    if (info_bits > 20) throw std::invalid_argument("too many information bits in one group");
    const std::uint32_t bad_mask = info_mask & ~good_mask;
    const unsigned bad_bits = static_cast<unsigned>(std::popcount(bad_mask));

    // Penalty of each node bit being 0 or 1; pattern deltas are sums of these.
    double pen0[32], pen1[32];
    for (unsigned j = 0; j < m; ++j) {
        pen0[j] = bit_penalty(alpha[j], 0, mode);
        pen1[j] = bit_penalty(alpha[j], 1, mode);
    }

    // Info positions in leaf order; leaf j is pattern bit m-1-j.
    unsigned info_pos[32];
    unsigned count = 0;
    for (unsigned j = 0; j < m; ++j)
        if (info_mask & (1u << (m - 1 - j))) info_pos[count++] = j;

    std::vector<GroupCandidate> full;
    std::vector<std::int64_t> best;
    if (decision) best.assign(checked_shift(bad_bits), -1);

    std::uint8_t v[32];
    for (std::uint64_t c = 0; c < checked_shift(info_bits); ++c) {
        std::uint32_t pattern = 0;
        for (unsigned i = 0; i < info_bits; ++i)
            if (c & (std::uint64_t{1} << (info_bits - 1 - i)))
                pattern |= 1u << (m - 1 - info_pos[i]);

        for (unsigned j = 0; j < m; ++j)
            v[j] = static_cast<std::uint8_t>((pattern >> (m - 1 - j)) & 1u);
        kernel_transform(std::span<std::uint8_t>(v, m));

        double delta = 0.0;
        for (unsigned j = 0; j < m; ++j) delta += v[j] ? pen1[j] : pen0[j];

        GroupCandidate cand{parent, pattern, delta, parent_metric + delta};
        if (!decision) {
            full.push_back(cand);
            continue;
        }
        std::uint64_t key = 0;
        unsigned bit = 0;
        for (unsigned b = 0; b < m; ++b)
            if (bad_mask & (1u << b)) {
                if (pattern & (1u << b)) key |= std::uint64_t{1} << bit;
                ++bit;
            }
        if (best[key] < 0) {
            best[key] = static_cast<std::int64_t>(full.size());
            full.push_back(cand);
        } else if (delta < full[static_cast<std::size_t>(best[key])].delta) {
            full[static_cast<std::size_t>(best[key])] = cand;
        }
    }

    if (decision) {
        std::sort(full.begin(), full.end(),
                  [](const GroupCandidate& a, const GroupCandidate& b) {
                      return a.pattern < b.pattern;
                  });
    }
    return full;
}

GroupListDecoder::GroupListDecoder(const PolarCodeSpec& code, const DecoderConfig& config)
    : code_(code), config_(config) {
    config_.validate(code_);
    mu_ = log2_exact(config_.group_width);
    group_count_ = code_.block_length / config_.group_width;

    alpha_offset_.assign(code_.n + 1, 0);
    beta_offset_.assign(code_.n + 2, 0);
    for (unsigned lvl = mu_; lvl < code_.n; ++lvl)
        alpha_offset_[lvl] = (std::size_t{1} << lvl) - (std::size_t{1} << mu_);
    alpha_size_ = (std::size_t{1} << code_.n) - (std::size_t{1} << mu_);
    for (unsigned lvl = mu_ + 1; lvl <= code_.n; ++lvl)
        beta_offset_[lvl] = (std::size_t{1} << (lvl - 1)) - (std::size_t{1} << mu_);
    beta_size_ = alpha_size_;
}

void GroupListDecoder::start(std::span<const double> llrs) {
    if (llrs.size() != code_.block_length)
        throw std::invalid_argument("LLR length does not match the block length");
    // The encoder applies B_N; undo it here so the butterfly runs in natural order.
    const auto rev = bit_reversal_permutation(code_.n);
    root_llrs_.resize(code_.block_length);
    for (std::size_t j = 0; j < code_.block_length; ++j) root_llrs_[j] = llrs[rev[j]];

    paths_.clear();
    DecoderPath initial;
    initial.history.assign(code_.block_length, 0);
    initial.metric = 0.0;
    initial.state.alpha.assign(alpha_size_, 0.0);
    initial.state.beta_left.assign(beta_size_, 0);
    paths_.push_back(std::move(initial));
    stats_.clear();
}

std::uint32_t GroupListDecoder::group_info_mask(std::size_t group) const {
    const unsigned m = static_cast<unsigned>(config_.group_width);
    std::uint32_t mask = 0;
    for (unsigned j = 0; j < m; ++j)
        if (!code_.frozen_mask[group * m + j]) mask |= 1u << (m - 1 - j);
    return mask;
}

std::uint32_t GroupListDecoder::group_good_mask(std::size_t group) const {
    const unsigned m = static_cast<unsigned>(config_.group_width);
    std::uint32_t mask = 0;
    for (unsigned j = 0; j < m; ++j)
        if (code_.good_mask[group * m + j]) mask |= 1u << (m - 1 - j);
    return mask;
}

void GroupListDecoder::compute_group_llrs(DecoderPath& path, std::size_t group) {
    if (mu_ == code_.n) return;  // the root is the group node

    auto level_src = [&](unsigned lvl) -> const double* {
        return lvl == code_.n ? root_llrs_.data() : path.state.alpha.data() + alpha_offset_[lvl];
    };
    auto apply_f = [&](unsigned lvl) {
        const double* src = level_src(lvl);
        double* dst = path.state.alpha.data() + alpha_offset_[lvl - 1];
        const std::size_t half = std::size_t{1} << (lvl - 1);
        for (std::size_t j = 0; j < half; ++j)
            dst[j] = f_combine(src[j], src[j + half], config_.metric_mode);
    };
    auto apply_g = [&](unsigned lvl) {
        const double* src = level_src(lvl);
        double* dst = path.state.alpha.data() + alpha_offset_[lvl - 1];
        const std::uint8_t* left = path.state.beta_left.data() + beta_offset_[lvl];
        const std::size_t half = std::size_t{1} << (lvl - 1);
        for (std::size_t j = 0; j < half; ++j)
            dst[j] = g_combine(src[j], src[j + half], left[j]);
    };

    if (group == 0) {
        for (unsigned lvl = code_.n; lvl > mu_; --lvl) apply_f(lvl);
    } else {
        const unsigned z = static_cast<unsigned>(std::countr_zero(group));
        apply_g(mu_ + z + 1);
        for (unsigned lvl = mu_ + z; lvl > mu_; --lvl) apply_f(lvl);
    }
}

void GroupListDecoder::propagate_partial_sums(DecoderPath& path, std::size_t group,
                                              std::uint32_t pattern) {
    const unsigned m = static_cast<unsigned>(config_.group_width);
    std::uint8_t cur_buf[32];
    for (unsigned j = 0; j < m; ++j) {
        std::uint8_t bit = static_cast<std::uint8_t>((pattern >> (m - 1 - j)) & 1u);
        path.history[group * m + j] = bit;
        cur_buf[j] = bit;
    }
    kernel_transform(std::span<std::uint8_t>(cur_buf, m));

    static thread_local BitVec cur, next;
    cur.assign(cur_buf, cur_buf + m);
    unsigned lvl = mu_;
    std::size_t idx = group;
    while (lvl < code_.n) {
        const std::size_t size = std::size_t{1} << lvl;
        if ((idx & 1) == 0) {
            std::memcpy(path.state.beta_left.data() + beta_offset_[lvl + 1], cur.data(), size);
            return;
        }
        const std::uint8_t* left = path.state.beta_left.data() + beta_offset_[lvl + 1];
        next.resize(2 * size);
        for (std::size_t j = 0; j < size; ++j) {
            next[j] = left[j] ^ cur[j];
            next[j + size] = cur[j];
        }
        cur.swap(next);
        ++lvl;
        idx >>= 1;
    }
}

std::vector<GroupCandidate> GroupListDecoder::group_candidate_metrics(std::size_t path_index,
                                                                      std::size_t group) {
    if (group >= group_count_) throw std::out_of_range("group index out of range");
    DecoderPath& path = paths_.at(path_index);
    compute_group_llrs(path, group);
    std::span<const double> alpha =
        mu_ == code_.n
            ? std::span<const double>(root_llrs_)
            : std::span<const double>(path.state.alpha.data() + alpha_offset_[mu_],
                                      config_.group_width);
    return candidates_for_group_llrs(alpha, group_info_mask(group), group_good_mask(group),
                                     false, config_.metric_mode,
                                     static_cast<std::uint32_t>(path_index), path.metric);
}

std::vector<GroupCandidate> GroupListDecoder::extend_full(std::size_t group) {
    std::vector<GroupCandidate> all;
    for (std::size_t p = 0; p < paths_.size(); ++p) {
        auto cands = group_candidate_metrics(p, group);
        all.insert(all.end(), cands.begin(), cands.end());
    }
    return all;
}

std::vector<GroupCandidate> GroupListDecoder::extend_decision_aided(std::size_t group) {
    std::vector<GroupCandidate> all;
    const std::uint32_t info_mask = group_info_mask(group);
    const std::uint32_t good_mask = group_good_mask(group);
    for (std::size_t p = 0; p < paths_.size(); ++p) {
        DecoderPath& path = paths_[p];
        compute_group_llrs(path, group);
        std::span<const double> alpha =
            mu_ == code_.n
                ? std::span<const double>(root_llrs_)
                : std::span<const double>(path.state.alpha.data() + alpha_offset_[mu_],
                                          config_.group_width);
        auto cands = candidates_for_group_llrs(alpha, info_mask, good_mask, true,
                                               config_.metric_mode,
                                               static_cast<std::uint32_t>(p), path.metric);
        all.insert(all.end(), cands.begin(), cands.end());
    }
    return all;
}

void GroupListDecoder::prune_top_l(std::vector<GroupCandidate> candidates, std::size_t group) {
    stats_.push_back({static_cast<std::uint32_t>(paths_.size()),
                      static_cast<std::uint64_t>(candidates.size())});

    std::sort(candidates.begin(), candidates.end(),
              [](const GroupCandidate& a, const GroupCandidate& b) {
                  if (a.total != b.total) return a.total < b.total;
                  if (a.parent != b.parent) return a.parent < b.parent;
                  return a.pattern < b.pattern;
              });
    const std::size_t keep = std::min<std::size_t>(config_.list_size, candidates.size());

    std::vector<std::uint32_t> remaining(paths_.size(), 0);
    for (std::size_t i = 0; i < keep; ++i) remaining[candidates[i].parent]++;

    std::vector<DecoderPath> survivors;
    survivors.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        const GroupCandidate& cand = candidates[i];
        DecoderPath next;
        next.metric = cand.total;
        if (--remaining[cand.parent] == 0) {
            next.history = std::move(paths_[cand.parent].history);
            next.state = std::move(paths_[cand.parent].state);
        } else {
            next.history = paths_[cand.parent].history;
            next.state = paths_[cand.parent].state;
        }
        propagate_partial_sums(next, group, cand.pattern);
        survivors.push_back(std::move(next));
    }
    paths_ = std::move(survivors);
}

DecodeResult GroupListDecoder::finish() const {
    DecodeResult result;
    result.paths.reserve(paths_.size());
    const auto info = code_.info_indices();
    for (const auto& path : paths_) {
        DecodedPath out;
        out.metric = path.metric;
        out.info_bits.reserve(info.size());
        for (auto i : info) out.info_bits.push_back(path.history[i]);
        result.paths.push_back(std::move(out));
    }
    result.group_stats = stats_;
    return result;
}

DecodeResult GroupListDecoder::decode(std::span<const double> llrs) {
    start(llrs);
    for (std::size_t k = 0; k < group_count_; ++k) {
        auto candidates = config_.decision_enabled ? extend_decision_aided(k) : extend_full(k);
        prune_top_l(std::move(candidates), k);
    }
    return finish();
}

DecodeResult decode(std::span<const double> llrs, const PolarCodeSpec& code,
                    const DecoderConfig& config) {
    GroupListDecoder decoder(code, config);
    return decoder.decode(llrs);
}

namespace {

// Reference bit-at-a-time SC-List decoder. Kept structurally separate from
// GroupListDecoder so the two can cross-check each other at m=1.
class SerialListDecoder {
public:
    SerialListDecoder(const PolarCodeSpec& code, const DecoderConfig& config)
        : code_(code), config_(config) {
        alpha_offset_.assign(code_.n + 1, 0);
        beta_offset_.assign(code_.n + 1, 0);
        for (unsigned lvl = 0; lvl < code_.n; ++lvl)
            alpha_offset_[lvl] = (std::size_t{1} << lvl) - 1;
        for (unsigned lvl = 1; lvl <= code_.n; ++lvl)
            beta_offset_[lvl] = (std::size_t{1} << (lvl - 1)) - 1;
        state_size_ = (std::size_t{1} << code_.n) - 1;
    }

    DecodeResult run(std::span<const double> llrs) {
        const auto rev = bit_reversal_permutation(code_.n);
        root_.resize(code_.block_length);
        for (std::size_t j = 0; j < code_.block_length; ++j) root_[j] = llrs[rev[j]];

        paths_.clear();
        paths_.push_back(Path{BitVec(code_.block_length, 0), 0.0,
                              std::vector<double>(state_size_, 0.0), BitVec(state_size_, 0)});
        stats_.clear();

        for (std::size_t i = 0; i < code_.block_length; ++i) step(i);

        DecodeResult result;
        const auto info = code_.info_indices();
        for (const auto& path : paths_) {
            DecodedPath out;
            out.metric = path.metric;
            for (auto idx : info) out.info_bits.push_back(path.history[idx]);
            result.paths.push_back(std::move(out));
        }
        result.group_stats = stats_;
        return result;
    }

private:
    struct Path {
        BitVec history;
        double metric;
        std::vector<double> alpha;
        BitVec beta_left;
    };

    struct Fork {
        std::uint32_t parent;
        std::uint8_t bit;
        double total;
    };

    double leaf_llr(Path& path, std::size_t i) {
        auto src_at = [&](unsigned lvl) -> const double* {
            return lvl == code_.n ? root_.data() : path.alpha.data() + alpha_offset_[lvl];
        };
        auto f_level = [&](unsigned lvl) {
            const double* src = src_at(lvl);
            double* dst = path.alpha.data() + alpha_offset_[lvl - 1];
            const std::size_t half = std::size_t{1} << (lvl - 1);
            for (std::size_t j = 0; j < half; ++j)
                dst[j] = f_combine(src[j], src[j + half], config_.metric_mode);
        };
        if (i == 0) {
            for (unsigned lvl = code_.n; lvl >= 1; --lvl) f_level(lvl);
        } else {
            const unsigned z = static_cast<unsigned>(std::countr_zero(i));
            const unsigned lvl = z + 1;
            const double* src = src_at(lvl);
            double* dst = path.alpha.data() + alpha_offset_[lvl - 1];
            const std::uint8_t* left = path.beta_left.data() + beta_offset_[lvl];
            const std::size_t half = std::size_t{1} << (lvl - 1);
            for (std::size_t j = 0; j < half; ++j)
                dst[j] = g_combine(src[j], src[j + half], left[j]);
            for (unsigned l2 = z; l2 >= 1; --l2) f_level(l2);
        }
        return path.alpha[alpha_offset_[0]];
    }

    void store_bit(Path& path, std::size_t i, std::uint8_t bit) {
        path.history[i] = bit;
        static thread_local BitVec cur, next;
        cur.assign(1, bit);
        unsigned lvl = 0;
        std::size_t idx = i;
        while (lvl < code_.n) {
            const std::size_t size = std::size_t{1} << lvl;
            if ((idx & 1) == 0) {
                std::memcpy(path.beta_left.data() + beta_offset_[lvl + 1], cur.data(), size);
                return;
            }
            const std::uint8_t* left = path.beta_left.data() + beta_offset_[lvl + 1];
            next.resize(2 * size);
            for (std::size_t j = 0; j < size; ++j) {
                next[j] = left[j] ^ cur[j];
                next[j + size] = cur[j];
            }
            cur.swap(next);
            ++lvl;
            idx >>= 1;
        }
    }

    void step(std::size_t i) {
        std::vector<Fork> forks;
        forks.reserve(2 * paths_.size());
        for (std::size_t p = 0; p < paths_.size(); ++p) {
            double alpha = leaf_llr(paths_[p], i);
            if (code_.frozen_mask[i]) {
                forks.push_back({static_cast<std::uint32_t>(p), 0,
                                 paths_[p].metric + bit_penalty(alpha, 0, config_.metric_mode)});
            } else {
                forks.push_back({static_cast<std::uint32_t>(p), 0,
                                 paths_[p].metric + bit_penalty(alpha, 0, config_.metric_mode)});
                forks.push_back({static_cast<std::uint32_t>(p), 1,
                                 paths_[p].metric + bit_penalty(alpha, 1, config_.metric_mode)});
            }
        }
        stats_.push_back({static_cast<std::uint32_t>(paths_.size()),
                          static_cast<std::uint64_t>(forks.size())});

        std::sort(forks.begin(), forks.end(), [](const Fork& a, const Fork& b) {
            if (a.total != b.total) return a.total < b.total;
            if (a.parent != b.parent) return a.parent < b.parent;
            return a.bit < b.bit;
        });
        const std::size_t keep = std::min<std::size_t>(config_.list_size, forks.size());

        std::vector<std::uint32_t> remaining(paths_.size(), 0);
        for (std::size_t c = 0; c < keep; ++c) remaining[forks[c].parent]++;

        std::vector<Path> survivors;
        survivors.reserve(keep);
        for (std::size_t c = 0; c < keep; ++c) {
            const Fork& fork = forks[c];
            Path next;
            next.metric = fork.total;
            if (--remaining[fork.parent] == 0) {
                next = Path{std::move(paths_[fork.parent].history), fork.total,
                            std::move(paths_[fork.parent].alpha),
                            std::move(paths_[fork.parent].beta_left)};
            } else {
                next = Path{paths_[fork.parent].history, fork.total, paths_[fork.parent].alpha,
                            paths_[fork.parent].beta_left};
            }
            store_bit(next, i, fork.bit);
            survivors.push_back(std::move(next));
        }
        paths_ = std::move(survivors);
    }

    const PolarCodeSpec& code_;
    DecoderConfig config_;
    std::vector<double> root_;
    std::vector<Path> paths_;
    std::vector<GroupStats> stats_;
    std::vector<std::size_t> alpha_offset_;
    std::vector<std::size_t> beta_offset_;
    std::size_t state_size_ = 0;
};

}  // namespace

DecodeResult decode_serial(std::span<const double> llrs, const PolarCodeSpec& code,
                           const DecoderConfig& config) {
    DecoderConfig serial = config;
    serial.group_width = 1;
    serial.decision_enabled = false;
    serial.validate(code);
    if (llrs.size() != code.block_length)
        throw std::invalid_argument("LLR length does not match the block length");
    SerialListDecoder decoder(code, serial);
    return decoder.run(llrs);
}

PathSelection select_output_path(const DecodeResult& result, const CrcSpec& crc) {
    if (result.paths.empty()) throw std::invalid_argument("empty decoding list");
    for (std::size_t i = 0; i < result.paths.size(); ++i)
        if (result.paths[i].info_bits.size() > crc.width &&
            crc_check(result.paths[i].info_bits, crc))
            return {i, true};
    return {0, false};
}

AdaptiveResult adaptive_decode(std::span<const double> llrs, const PolarCodeSpec& code,
                               const DecoderConfig& config, const CrcSpec& crc) {
    std::vector<std::size_t> schedule;
    for (std::size_t l = 1; l < config.max_list_size; l *= 2) schedule.push_back(l);
    schedule.push_back(config.max_list_size);

    AdaptiveResult result;
    for (std::size_t l : schedule) {
        DecoderConfig attempt = config;
        attempt.list_size = l;
        DecodeResult decoded = decode(llrs, code, attempt);
        result.list_sizes_tried.push_back(l);
        PathSelection sel = select_output_path(decoded, crc);
        result.info_bits = decoded.paths[sel.path_index].info_bits;
        result.crc_pass = sel.crc_pass;
        result.last = std::move(decoded);
        if (sel.crc_pass) break;
    }
    return result;
}

}  // namespace polar
