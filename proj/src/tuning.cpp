#include "aura/tuning.hpp"

#include "aura/error.hpp"
#include "aura/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

namespace aura {

namespace {

// 0.9 * 0.7 is 0.63000000000000012 in binary; snap to the nearest 1e-9.
double snap(double v) { return std::round(v * 1e9) / 1e9; }

std::vector<double> axis(double base, bool vary) {
    if (!vary) return {base};
    return {snap(0.9 * base), base, snap(1.1 * base)};
}

std::vector<LabeledPrediction> predictions_for(std::span<const std::string> ids,
                                               const std::vector<VideoPrediction>& preds,
                                               std::span<const LabeledStream> videos,
                                               const std::unordered_map<std::string, std::size_t>& index,
                                               bool collision) {
    std::vector<LabeledPrediction> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        const std::size_t i = index.at(id);
        out.push_back({id, collision ? preds[i].collision : preds[i].agitation,
                       collision ? videos[i].collision : videos[i].agitation});
    }
    return out;
}

ConfigEvaluation score(std::span<const std::string> ids, const std::vector<VideoPrediction>& preds,
                       std::span<const LabeledStream> videos,
                       const std::unordered_map<std::string, std::size_t>& index) {
    ConfigEvaluation e;
    e.collision = classification_metrics(confusion(predictions_for(ids, preds, videos, index, true)));
    e.agitation = classification_metrics(confusion(predictions_for(ids, preds, videos, index, false)));
    e.combined_f1 = combined_f1(e.collision.f1, e.agitation.f1);
    e.flagged = !e.combined_f1.has_value();
    return e;
}

}  // namespace

FoldPlan make_folds(std::span<const std::string> ids, std::uint64_t seed, const FoldOptions& options) {
    if (options.exact_study_size && ids.size() != kStudyVideoCount) {
        throw ValidationError("fold plan needs exactly " + std::to_string(kStudyVideoCount) +
                              " video ids, got " + std::to_string(ids.size()));
    }
    if (ids.size() < 2 * kFoldCount) throw ValidationError("fold plan needs at least 6 video ids");
    if (!options.strata.empty() && options.strata.size() != ids.size())
        throw ValidationError("strata must match the id count");
    if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size())
        throw ValidationError("fold plan ids must be distinct");

    Rng rng(seed);
    std::vector<std::size_t> order(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::array<std::vector<std::size_t>, kFoldCount> blocks;
    if (options.strata.empty()) {
        rng.shuffle(std::span(order));
        // Block sizes differ by at most one; earlier blocks take the extras.
        const std::size_t n = order.size();
        std::size_t pos = 0;
        for (std::size_t b = 0; b < kFoldCount; ++b) {
            const std::size_t len = n / kFoldCount + (b < n % kFoldCount ? 1 : 0);
            blocks[b].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                             order.begin() + static_cast<std::ptrdiff_t>(pos + len));
            pos += len;
        }
    } else {
        std::map<int, std::vector<std::size_t>> by_stratum;
        for (std::size_t i : order) by_stratum[options.strata[i]].push_back(i);
        std::size_t next = 0;
        for (auto& [stratum, members] : by_stratum) {
            rng.shuffle(std::span(members));
            for (std::size_t i : members) blocks[next++ % kFoldCount].push_back(i);
        }
    }

    FoldPlan plan;
    for (std::size_t f = 0; f < kFoldCount; ++f) {
        for (std::size_t i : blocks[f]) plan.tuning[f].push_back(ids[i]);
        for (std::size_t g = 0; g < kFoldCount; ++g) {
            if (g == f) continue;
            for (std::size_t i : blocks[g]) plan.validation[f].push_back(ids[i]);
        }
    }
    return plan;
}

GridSpec GridSpec::around(const TuningConfig& base, bool vary_tau_speed, bool vary_tau_valid,
                          bool vary_s_r) {
    return {axis(base.tau_speed, vary_tau_speed), axis(base.tau_valid, vary_tau_valid),
            axis(base.s_r, vary_s_r)};
}

std::vector<TuningConfig> enumerate_grid(const GridSpec& spec) {
    std::vector<TuningConfig> out;
    out.reserve(spec.tau_speed.size() * spec.tau_valid.size() * spec.s_r.size());
    for (double speed : spec.tau_speed) {
        for (double valid : spec.tau_valid) {
            for (double sr : spec.s_r) out.push_back({speed, valid, sr});
        }
    }
    return out;
}

DetectorParams apply(const DetectorParams& base, const TuningConfig& config) {
    DetectorParams p = base;
    p.agitation.tau_speed = config.tau_speed;
    p.agitation.tau_valid = config.tau_valid;
    p.collision.tau_valid = config.tau_valid;
    p.collision.mode.s_r = config.s_r;
    return p;
}

double ConfigEvaluation::selection_score() const noexcept {
    return combined_f1 ? *combined_f1 : -std::numeric_limits<double>::infinity();
}

ConfigEvaluation evaluate_config(const TuningConfig& config, std::span<const LabeledStream> videos,
                                 const DetectorParams& base) {
    const DetectorParams params = apply(base, config);
    validate(params);
    std::vector<VideoPrediction> preds;
    std::vector<std::string> ids;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < videos.size(); ++i) {
        preds.push_back(predict_video(videos[i].stream, params));
        ids.push_back(videos[i].video_id);
        index.emplace(videos[i].video_id, i);
    }
    return score(ids, preds, videos, index);
}

TuningReport run_folds(const FoldPlan& plan, std::span<const TuningConfig> grid,
                       std::span<const LabeledStream> videos, const DetectorParams& base,
                       unsigned threads) {
    if (grid.empty()) throw ValidationError("tuning grid is empty");
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < videos.size(); ++i) {
        if (!index.emplace(videos[i].video_id, i).second)
            throw ValidationError("duplicate stream for video \"" + videos[i].video_id + "\"");
    }
    for (std::size_t f = 0; f < kFoldCount; ++f) {
        for (const auto* set : {&plan.tuning[f], &plan.validation[f]}) {
            for (const auto& id : *set) {
                if (!index.contains(id)) throw ValidationError("missing stream for video \"" + id + "\"");
            }
        }
    }
    std::vector<DetectorParams> params;
    for (const auto& c : grid) {
        params.push_back(apply(base, c));
        validate(params.back());
    }

    // predictions[c][v]; each slot is written by exactly one worker.
    std::vector<std::vector<VideoPrediction>> predictions(grid.size(),
                                                          std::vector<VideoPrediction>(videos.size()));
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t c = next++; c < grid.size(); c = next++) {
            try {
                for (std::size_t v = 0; v < videos.size(); ++v)
                    predictions[c][v] = predict_video(videos[v].stream, params[c]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    TuningReport report;
    report.grid.assign(grid.begin(), grid.end());
    std::optional<double> lo, hi;
    bool all_defined = true;
    for (std::size_t f = 0; f < kFoldCount; ++f) {
        FoldResult& fold = report.folds[f];
        fold.tuning_score = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < grid.size(); ++c) {
            fold.tuning.push_back(score(plan.tuning[f], predictions[c], videos, index));
            ++report.tuning_evaluations;
            const double s = fold.tuning.back().selection_score();
            if (c == 0 || s > fold.tuning_score) {
                fold.tuning_score = s;
                fold.best_index = c;
            }
        }
        fold.best = grid[fold.best_index];
        fold.validation = score(plan.validation[f], predictions[fold.best_index], videos, index);
        if (const auto& v = fold.validation.combined_f1) {
            lo = lo ? std::min(*lo, *v) : *v;
            hi = hi ? std::max(*hi, *v) : *v;
        } else {
            all_defined = false;
        }
    }
    if (all_defined && lo && hi) report.cross_fold_deviation = *hi - *lo;
    return report;
}

}  // namespace aura
