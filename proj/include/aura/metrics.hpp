#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aura {

struct ConfusionMatrix {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const noexcept { return tp + fp + fn + tn; }
    std::int64_t positives() const noexcept { return tp + fn; }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct LabeledPrediction {
    std::string video_id;
    bool predicted = false;
    bool actual = false;
};

// Throws ValidationError on an empty set or a repeated video id.
ConfusionMatrix confusion(std::span<const LabeledPrediction> preds);

// nullopt marks an undefined metric (zero denominator); never a silent 0.
struct ClassificationMetrics {
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm) noexcept;

enum class Metric { accuracy, precision, recall, f1 };

inline constexpr Metric kAllMetrics[] = {Metric::accuracy, Metric::precision, Metric::recall,
                                         Metric::f1};

std::string_view to_string(Metric m) noexcept;
std::optional<double> select(const ClassificationMetrics& m, Metric which) noexcept;

inline constexpr int kDefaultBootstrapReplicates = 1000;
inline constexpr std::uint64_t kDefaultBootstrapSeed = 20240601;

struct CiEstimate {
    Metric metric = Metric::f1;
    std::optional<double> point;  // on the full set
    double lo = 0.0;              // 2.5th percentile of replicates
    double hi = 0.0;              // 97.5th percentile
    int replicates = 0;           // B
    int skipped = 0;              // replicates where the metric was undefined
    std::uint64_t seed = 0;
};

// Percentile bootstrap over videos. Replicate b draws from a generator seeded
// with derive_seed(seed, b), so results do not depend on evaluation order.
// Throws DomainError when every replicate is undefined.
CiEstimate bootstrap_ci(std::span<const LabeledPrediction> preds, Metric metric,
                        int replicates = kDefaultBootstrapReplicates,
                        std::uint64_t seed = kDefaultBootstrapSeed);

// Linear interpolation between order statistics (Hyndman-Fan type 7).
// `sorted` must be non-empty and ascending; q in [0, 1].
double percentile(std::span<const double> sorted, double q);

// Mean of collision and agitation F1; undefined if either is.
std::optional<double> combined_f1(std::optional<double> f1_collision,
                                  std::optional<double> f1_agitation) noexcept;

}  // namespace aura
