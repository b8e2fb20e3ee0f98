#pragma once

#include "aura/engine.hpp"
#include "aura/keypoint_stream.hpp"
#include "aura/metrics.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aura {

inline constexpr std::size_t kFoldCount = 3;
inline constexpr std::size_t kStudyVideoCount = 63;

// Three disjoint tuning blocks; each fold validates on the other two blocks.
struct FoldPlan {
    std::array<std::vector<std::string>, kFoldCount> tuning;
    std::array<std::vector<std::string>, kFoldCount> validation;
};

struct FoldOptions {
    // Require exactly 63 ids (21/42 splits). When false any count >= 6 is
    // split into near-equal blocks.
    bool exact_study_size = true;
    // Optional stratum per id (e.g. a label code). When non-empty, each stratum
    // is shuffled and dealt round-robin across blocks.
    std::vector<int> strata;
};

// Deterministic shuffle by seed, then partition. Throws ValidationError on a
// wrong count or duplicate ids.
FoldPlan make_folds(std::span<const std::string> ids, std::uint64_t seed,
                    const FoldOptions& options = {});

// Values are absolute, not multipliers.
struct TuningConfig {
    double tau_speed = 0.18;
    double tau_valid = 0.7;
    double s_r = 1.0;

    friend bool operator==(const TuningConfig&, const TuningConfig&) = default;
};

struct GridSpec {
    std::vector<double> tau_speed;
    std::vector<double> tau_valid;
    std::vector<double> s_r;

    // {0.9, 1.0, 1.1} x base on every axis that is enabled; disabled axes stay
    // at the base value alone.
    static GridSpec around(const TuningConfig& base, bool vary_tau_speed = true,
                           bool vary_tau_valid = true, bool vary_s_r = true);
};

// Cross product with tau_speed slowest-varying and s_r fastest.
std::vector<TuningConfig> enumerate_grid(const GridSpec& spec);

// Base detector params with a tuning config laid over them.
DetectorParams apply(const DetectorParams& base, const TuningConfig& config);

struct LabeledStream {
    std::string video_id;
    KeypointStream stream;
    bool collision = false;
    bool agitation = false;
};

struct ConfigEvaluation {
    ClassificationMetrics collision;
    ClassificationMetrics agitation;
    std::optional<double> combined_f1;
    // Set when combined_f1 is undefined; such configs never win selection.
    bool flagged = false;

    double selection_score() const noexcept;
};

ConfigEvaluation evaluate_config(const TuningConfig& config, std::span<const LabeledStream> videos,
                                 const DetectorParams& base);

struct FoldResult {
    std::size_t best_index = 0;
    TuningConfig best;
    double tuning_score = 0.0;  // selection score of the winner (-inf if all flagged)
    std::vector<ConfigEvaluation> tuning;  // one per grid config
    ConfigEvaluation validation;           // winner on the held-out ids
};

struct TuningReport {
    std::vector<TuningConfig> grid;
    std::array<FoldResult, kFoldCount> folds;
    // Max minus min of held-out combined F1 across folds; undefined if any
    // fold's held-out F1 is undefined.
    std::optional<double> cross_fold_deviation;
    std::size_t tuning_evaluations = 0;
};

// Evaluates every config on every video once (in parallel across configs,
// `threads` == 0 picks the hardware concurrency), then selects per fold by
// tuning combined F1 with ties going to the earliest grid entry. Throws
// ValidationError naming any planned id without a stream.
TuningReport run_folds(const FoldPlan& plan, std::span<const TuningConfig> grid,
                       std::span<const LabeledStream> videos, const DetectorParams& base,
                       unsigned threads = 0);

}  // namespace aura
