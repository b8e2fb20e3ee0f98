#include "aura/metrics.hpp"

#include "aura/error.hpp"
#include "aura/random.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace aura {

ConfusionMatrix confusion(std::span<const LabeledPrediction> preds) {
    if (preds.empty()) throw ValidationError("no predictions to tally");
    std::unordered_set<std::string_view> seen;
    ConfusionMatrix cm;
    for (const auto& p : preds) {
        if (!seen.insert(p.video_id).second)
            throw ValidationError("duplicate video id \"" + p.video_id + "\"");
        if (p.predicted && p.actual) ++cm.tp;
        else if (p.predicted) ++cm.fp;
        else if (p.actual) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm) noexcept {
    ClassificationMetrics m;
    const auto ratio = [](std::int64_t num, std::int64_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    m.accuracy = ratio(cm.tp + cm.tn, cm.total());
    m.precision = ratio(cm.tp, cm.tp + cm.fp);
    m.recall = ratio(cm.tp, cm.tp + cm.fn);
    if (m.precision && m.recall) m.f1 = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn);
    return m;
}

std::string_view to_string(Metric m) noexcept {
    switch (m) {
        case Metric::accuracy: return "accuracy";
        case Metric::precision: return "precision";
        case Metric::recall: return "recall";
        case Metric::f1: return "f1";
    }
    return "f1";
}

std::optional<double> select(const ClassificationMetrics& m, Metric which) noexcept {
    switch (which) {
        case Metric::accuracy: return m.accuracy;
        case Metric::precision: return m.precision;
        case Metric::recall: return m.recall;
        case Metric::f1: return m.f1;
    }
    return std::nullopt;
}

double percentile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw DomainError("percentile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

CiEstimate bootstrap_ci(std::span<const LabeledPrediction> preds, Metric metric, int replicates,
                        std::uint64_t seed) {
    if (replicates < 1) throw DomainError("bootstrap needs at least one replicate");
    CiEstimate est;
    est.metric = metric;
    est.replicates = replicates;
    est.seed = seed;
    est.point = select(classification_metrics(confusion(preds)), metric);

    const std::uint64_t n = preds.size();
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(replicates));
    for (int b = 0; b < replicates; ++b) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
        ConfusionMatrix cm;
        for (std::uint64_t i = 0; i < n; ++i) {
            const auto& p = preds[rng.below(n)];
            if (p.predicted && p.actual) ++cm.tp;
            else if (p.predicted) ++cm.fp;
            else if (p.actual) ++cm.fn;
            else ++cm.tn;
        }
        if (auto v = select(classification_metrics(cm), metric)) values.push_back(*v);
        else ++est.skipped;
    }
    if (values.empty()) {
        throw DomainError("metric " + std::string(to_string(metric)) +
                          " undefined in every bootstrap replicate");
    }
    std::sort(values.begin(), values.end());
    est.lo = percentile(values, 0.025);
    est.hi = percentile(values, 0.975);
    return est;
}

std::optional<double> combined_f1(std::optional<double> f1_collision,
                                  std::optional<double> f1_agitation) noexcept {
    if (!f1_collision || !f1_agitation) return std::nullopt;
    return 0.5 * (*f1_collision + *f1_agitation);
}

}  // namespace aura
