#pragma once

#include "aura/keypoint_stream.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace aura {

// How per-keypoint velocities are combined inside a window.
enum class VelocityPooling {
    // One mean velocity per frame transition, then statistics over the w-1
    // transition means. Default.
    aggregate,
    // Every (keypoint, transition) velocity pooled into one set.
    pooled,
};

std::string_view to_string(VelocityPooling p) noexcept;

struct AgitationParams {
    double tau_speed = 0.18;  // normalized units per second
    int window = 5;           // frames
    double tau_valid = 0.7;
    // Landmarks considered; empty means every landmark in the stream.
    std::vector<LandmarkId> tracked;
    VelocityPooling pooling = VelocityPooling::aggregate;

    friend bool operator==(const AgitationParams&, const AgitationParams&) = default;
};

void validate(const AgitationParams& params);

struct AgitationFrameResult {
    std::int64_t frame_index = 0;
    double timestamp_s = 0.0;
    double mean_velocity = 0.0;
    double peak_velocity = 0.0;
    double cumulative_velocity = 0.0;
    bool is_agitation = false;
    // Transitions contributing at least one velocity.
    int n_valid_transitions = 0;
    // Velocities behind the statistics (w-1 at most in aggregate mode).
    int n_values = 0;
};

// 3D displacement over dt. Throws DomainError when dt <= 0.
double keypoint_velocity(const Landmark& prev, const Landmark& curr, double dt);

// Velocities of tracked landmarks valid in both frames. Empty when dt <= 0.
std::vector<double> transition_velocities(const KeypointFrame& prev, const KeypointFrame& curr,
                                          const AgitationParams& params);

// Mean of transition_velocities, nullopt if none.
std::optional<double> frame_aggregate_velocity(const KeypointFrame& prev,
                                               const KeypointFrame& curr,
                                               const AgitationParams& params);

// mean/peak/cumulative over a velocity set and the three-way trigger. All zero
// and not agitated for an empty set.
AgitationFrameResult summarize_velocities(std::span<const double> values, double tau_speed,
                                          int window);

// Sliding window (stride 1) over the last w frames.
class AgitationWindow {
public:
    explicit AgitationWindow(AgitationParams params = {});

    // Pushes a frame and returns the statistics of the window ending at it.
    // With fewer than two buffered frames the result is all zeros.
    AgitationFrameResult push(const KeypointFrame& frame);

    // Frames currently in the window.
    std::size_t size() const noexcept { return last_ ? transitions_.size() + 1 : 0; }
    const AgitationParams& params() const noexcept { return params_; }

private:
    AgitationFrameResult stats() const;

    AgitationParams params_;
    std::optional<KeypointFrame> last_;
    // Velocity sets of the buffered transitions, oldest first.
    std::deque<std::vector<double>> transitions_;
};

// Video-level positive: any window flagged.
bool video_prediction(std::span<const AgitationFrameResult> results) noexcept;

std::vector<AgitationFrameResult> detect_agitation(const KeypointStream& stream,
                                                   const AgitationParams& params);

}  // namespace aura
