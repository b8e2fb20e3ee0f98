#include "aura/collision.hpp"

#include "aura/error.hpp"

#include <algorithm>
#include <cmath>

namespace aura {

void validate(const CollisionParams& p) {
    if (!(p.alpha >= 0.0) || !(p.beta >= 0.0) || !(p.alpha + p.beta > 0.0))
        throw ValidationError("alpha and beta must be non-negative with a positive sum");
    if (!(p.tau_base > 0.0)) throw ValidationError("tau_base must be positive");
    if (!(p.tau_score > 0.0 && p.tau_score <= 1.0))
        throw ValidationError("tau_score must lie in (0, 1]");
    if (!(p.tau_duration >= 0.0)) throw ValidationError("tau_duration must be non-negative");
    if (!(p.tau_valid >= 0.0 && p.tau_valid <= 1.0))
        throw ValidationError("tau_valid must lie in [0, 1]");
    if (!(p.r_m_base > 0.0) || !(p.r_h_base > 0.0))
        throw ValidationError("base aura radii must be positive");
    validate(p.mode);
}

double overlap_score(double d_2d, double r_h, double r_m) noexcept {
    return std::max(0.0, 1.0 - d_2d / (r_h + r_m));
}

double proximity_score(double d_3d, double tau_base) noexcept {
    return std::max(0.0, 1.0 - d_3d / tau_base);
}

double collision_score(double overlap, double proximity, double alpha, double beta) noexcept {
    return alpha * overlap + beta * proximity;
}

CollisionFrameResult score_frame(const KeypointFrame& frame, const StreamHeader& header,
                                 const CollisionParams& params) {
    CollisionFrameResult r;
    r.frame_index = frame.index;
    r.timestamp_s = frame.timestamp_s;
    r.anchors = anchors(frame, header, params.tau_valid);

    std::optional<double> head, hand;
    if (params.mode.kind == AuraMode::Kind::relative) {
        head = head_size(frame, header, params.tau_valid);
        hand = hand_size(frame, header, params.tau_valid);
    }
    r.radii = aura_radii(params.mode, params.r_m_base, params.r_h_base, head, hand);

    for (HandSide s : kHandSides) {
        HandScore& hs = r.hands[static_cast<std::size_t>(s)];
        const auto& hand2 = r.anchors.hand_center(s);
        const auto& hand3 = r.anchors.hand_center_3d(s);
        if (!r.anchors.mouth_center || !hand2) continue;
        hs.anchors_available = true;
        hs.overlap = overlap_score(dist_2d(*hand2, *r.anchors.mouth_center), r.radii.hand,
                                   r.radii.mouth);
        hs.proximity = proximity_score(dist_3d(*hand3, *r.anchors.mouth_center_3d), params.tau_base);
        hs.score = collision_score(hs.overlap, hs.proximity, params.alpha, params.beta);
        hs.risk = hs.score > params.tau_score;
    }
    return r;
}

CollisionTrack::CollisionTrack(CollisionParams params) : params_(params) { validate(params_); }

CollisionFrameResult CollisionTrack::step(const KeypointFrame& frame, const StreamHeader& header) {
    if (last_index_ && (frame.index <= *last_index_ || frame.timestamp_s < last_timestamp_)) {
        throw SequencingError("frame " + std::to_string(frame.index) +
                              " applied after frame " + std::to_string(*last_index_));
    }

    CollisionFrameResult r = score_frame(frame, header, params_);
    const double t = frame.timestamp_s;

    for (HandSide s : kHandSides) {
        SideState& st = side(s);
        HandScore& hs = r.hands[static_cast<std::size_t>(s)];
        if (hs.risk) {
            if (!st.risk_since) {
                st.risk_since = t;
                st.risk_since_frame = frame.index;
            }
            if (!st.confirmed && t - *st.risk_since > params_.tau_duration) {
                st.confirmed = true;
                st.open_event = events_.size();
                events_.push_back({s, *st.risk_since, t, t, st.risk_since_frame, frame.index,
                                   frame.index, true});
            }
        } else if (st.risk_since) {
            if (st.confirmed) {
                CollisionEvent& ev = events_[st.open_event];
                ev.end_s = t;
                ev.end_frame = frame.index;
                ev.open_at_end = false;
            }
            st = SideState{};
        }
        if (st.confirmed) {
            // Until closed, an open event's end tracks the latest risk frame.
            CollisionEvent& ev = events_[st.open_event];
            ev.end_s = t;
            ev.end_frame = frame.index;
        }
        hs.confirmed = st.confirmed;
    }

    last_index_ = frame.index;
    last_timestamp_ = t;
    return r;
}

void CollisionTrack::finish() {
    for (HandSide s : kHandSides) side(s) = SideState{};
}

std::vector<CollisionEvent> detect_collisions(const KeypointStream& stream,
                                              const CollisionParams& params) {
    CollisionTrack track(params);
    for (const auto& f : stream.frames) track.step(f, stream.header);
    track.finish();
    return track.events();
}

}  // namespace aura
