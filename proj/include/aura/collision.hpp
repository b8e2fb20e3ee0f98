#pragma once

#include "aura/geometry.hpp"
#include "aura/keypoint_stream.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace aura {

// Collision thresholds.
struct CollisionParams {
    double tau_base = 0.3;      // 3D distance threshold, normalized units
    double alpha = 0.7;         // 2D overlap weight
    double beta = 0.3;          // 3D proximity weight
    double tau_score = 0.3;     // risk when score > tau_score
    double tau_duration = 0.3;  // seconds of continuous risk before confirmation
    double tau_valid = 0.7;
    AuraMode mode;
    double r_m_base = 150.0;  // mouth aura radius, pixels
    double r_h_base = 100.0;  // hand aura radius, pixels

    friend bool operator==(const CollisionParams&, const CollisionParams&) = default;
};

void validate(const CollisionParams& params);

// max(0, 1 - d_2d / (r_h + r_m))
double overlap_score(double d_2d, double r_h, double r_m) noexcept;
// max(0, 1 - d_3d / tau_base)
double proximity_score(double d_3d, double tau_base) noexcept;
// alpha * overlap + beta * proximity
double collision_score(double overlap, double proximity, double alpha, double beta) noexcept;

struct HandScore {
    bool anchors_available = false;  // mouth and this hand both present
    double overlap = 0.0;
    double proximity = 0.0;
    double score = 0.0;
    bool risk = false;
    bool confirmed = false;  // inside a confirmed interval after this frame
};

struct CollisionFrameResult {
    std::int64_t frame_index = 0;
    double timestamp_s = 0.0;
    AnchorSet anchors;
    AuraRadii radii;
    std::array<HandScore, 2> hands;  // indexed by HandSide

    const HandScore& hand(HandSide s) const noexcept { return hands[static_cast<std::size_t>(s)]; }
};

struct CollisionEvent {
    HandSide side = HandSide::left;
    double onset_s = 0.0;
    double confirmed_s = 0.0;
    double end_s = 0.0;
    std::int64_t onset_frame = 0;
    std::int64_t confirmed_frame = 0;
    std::int64_t end_frame = 0;
    // True when the stream ended while the interval was still in risk; end_*
    // then refer to the last frame, which was itself a risk frame.
    bool open_at_end = false;

    friend bool operator==(const CollisionEvent&, const CollisionEvent&) = default;
};

// Scores one frame without touching any persistence state.
CollisionFrameResult score_frame(const KeypointFrame& frame, const StreamHeader& header,
                                 const CollisionParams& params);

// Per-hand persistence state machine. Risk intervals are tracked per hand; an
// interval confirms once its wall-clock length strictly exceeds tau_duration
// and stays confirmed (one event) until a non-risk frame closes it.
class CollisionTrack {
public:
    explicit CollisionTrack(CollisionParams params = {});

    // Frames must arrive in stream order; throws SequencingError otherwise.
    CollisionFrameResult step(const KeypointFrame& frame, const StreamHeader& header);

    // Closes intervals still open at end of stream. Idempotent.
    void finish();

    const std::vector<CollisionEvent>& events() const noexcept { return events_; }
    const CollisionParams& params() const noexcept { return params_; }
    bool in_risk(HandSide s) const noexcept { return side(s).risk_since.has_value(); }
    bool confirmed(HandSide s) const noexcept { return side(s).confirmed; }

private:
    struct SideState {
        std::optional<double> risk_since;
        std::int64_t risk_since_frame = 0;
        bool confirmed = false;
        std::size_t open_event = 0;
    };

    SideState& side(HandSide s) noexcept { return sides_[static_cast<std::size_t>(s)]; }
    const SideState& side(HandSide s) const noexcept { return sides_[static_cast<std::size_t>(s)]; }

    CollisionParams params_;
    std::array<SideState, 2> sides_{};
    std::vector<CollisionEvent> events_;
    std::optional<std::int64_t> last_index_;
    double last_timestamp_ = 0.0;
};

// Video-level positive: at least one confirmed event.
inline bool video_prediction(std::span<const CollisionEvent> events) noexcept {
    return !events.empty();
}

// Runs a whole stream through a fresh track.
std::vector<CollisionEvent> detect_collisions(const KeypointStream& stream,
                                              const CollisionParams& params);

}  // namespace aura
