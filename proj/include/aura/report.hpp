#pragma once

#include "aura/engine.hpp"
#include "aura/metrics.hpp"
#include "aura/reliability.hpp"
#include "aura/tuning.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace aura {

// Rounds to 6 significant digits, the precision of every numeric output field.
double round_sig6(double v) noexcept;

// Event file: one "collision" record per confirmed event, one
// "agitation_window" record per frame, and a closing "video_summary".
std::string events_jsonl(const StreamHeader& header, const DetectionResult& result);

enum class AuraState { normal, collision };

struct AuraAnnotation {
    std::optional<PixelPoint> center;
    double radius = 0.0;
    AuraState state = AuraState::normal;
};

// Overlay data for one frame: auras, LH/RH scores and the VEL readout.
struct FrameAnnotation {
    std::int64_t frame = 0;
    double timestamp_s = 0.0;
    AuraAnnotation mouth;
    AuraAnnotation hand_left;
    AuraAnnotation hand_right;
    double lh_score = 0.0;
    double rh_score = 0.0;
    double vel = 0.0;
    bool agitation = false;
};

std::string_view to_string(AuraState s) noexcept;
// Renderer color: normal -> green, collision -> red.
std::string_view color_of(AuraState s) noexcept;

std::vector<FrameAnnotation> annotate(const DetectionResult& result);
std::string annotations_jsonl(const std::vector<FrameAnnotation>& frames);

// Video-level label file: CSV "video_id,collision,agitation" with 0/1 cells.
std::map<std::string, VideoPrediction> parse_label_csv(std::string_view text);
std::map<std::string, VideoPrediction> load_label_csv(const std::string& path);
std::string label_csv(const std::map<std::string, VideoPrediction>& labels);

// One record per (behavior, metric): keys behavior, metric, point, ci_lo,
// ci_hi, B, seed, skipped. Undefined values are null.
std::string evaluation_jsonl(const std::map<std::string, std::vector<CiEstimate>>& by_behavior);

// One "config" record per fold x grid entry, one "fold" record per fold and a
// closing "summary".
std::string tuning_jsonl(const TuningReport& report);

std::string icc_json(const IccResult& result, std::size_t subjects, std::size_t raters);

// Writes via a sibling temp file and rename.
void write_file_atomic(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace aura
