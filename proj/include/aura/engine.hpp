#pragma once

#include "aura/agitation.hpp"
#include "aura/collision.hpp"
#include "aura/keypoint_stream.hpp"
#include "aura/metrics.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace aura {

struct DetectorParams {
    CollisionParams collision;
    AgitationParams agitation;

    friend bool operator==(const DetectorParams&, const DetectorParams&) = default;
};

void validate(const DetectorParams& params);

// Whole-engine configuration: detector thresholds plus evaluation settings.
struct EngineConfig {
    DetectorParams detector;
    int bootstrap = kDefaultBootstrapReplicates;
    std::uint64_t seed = kDefaultBootstrapSeed;

    friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

// Flat "key = value" document, one pair per line, '#' starts a comment.
// Keys: tau_base r_m r_h alpha beta tau_score tau_duration tau_speed tau_valid
// w aura_mode lambda s_r velocity_pooling bootstrap seed. Unknown or repeated
// keys are errors. tau_valid applies to both detectors.
EngineConfig parse_config(std::string_view text);
EngineConfig load_config(const std::string& path);
std::string serialize_config(const EngineConfig& config);

struct VideoPrediction {
    bool collision = false;
    bool agitation = false;

    friend bool operator==(const VideoPrediction&, const VideoPrediction&) = default;
};

struct DetectionResult {
    std::vector<CollisionFrameResult> collision_frames;
    std::vector<CollisionEvent> events;
    std::vector<AgitationFrameResult> agitation_frames;
    VideoPrediction prediction;
    // Frames on which relative mode fell back to a fixed radius.
    int radius_fallback_frames = 0;
};

// Runs both detectors over a stream in one pass.
DetectionResult run_detection(const KeypointStream& stream, const DetectorParams& params);

// Video-level labels only; same result as run_detection(...).prediction.
VideoPrediction predict_video(const KeypointStream& stream, const DetectorParams& params);

}  // namespace aura
