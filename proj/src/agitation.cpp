#include "aura/agitation.hpp"

#include "aura/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aura {

std::string_view to_string(VelocityPooling p) noexcept {
    return p == VelocityPooling::aggregate ? "aggregate" : "pooled";
}

void validate(const AgitationParams& p) {
    if (!(p.tau_speed > 0.0)) throw ValidationError("tau_speed must be positive");
    if (p.window < 2) throw ValidationError("window must hold at least 2 frames");
    if (!(p.tau_valid >= 0.0 && p.tau_valid <= 1.0))
        throw ValidationError("tau_valid must lie in [0, 1]");
}

double keypoint_velocity(const Landmark& prev, const Landmark& curr, double dt) {
    if (!(dt > 0.0)) throw DomainError("velocity needs a positive time step");
    return std::hypot(curr.x - prev.x, curr.y - prev.y, curr.z - prev.z) / dt;
}

std::vector<double> transition_velocities(const KeypointFrame& prev, const KeypointFrame& curr,
                                          const AgitationParams& params) {
    std::vector<double> out;
    const double dt = curr.timestamp_s - prev.timestamp_s;
    if (!(dt > 0.0)) return out;

    auto visit = [&](LandmarkId id) {
        const Landmark* a = valid_landmark(prev, id, params.tau_valid);
        const Landmark* b = valid_landmark(curr, id, params.tau_valid);
        if (a && b) out.push_back(keypoint_velocity(*a, *b, dt));
    };
    if (params.tracked.empty()) {
        for (LandmarkId id : all_landmarks()) visit(id);
    } else {
        for (LandmarkId id : params.tracked) visit(id);
    }
    return out;
}

std::optional<double> frame_aggregate_velocity(const KeypointFrame& prev,
                                               const KeypointFrame& curr,
                                               const AgitationParams& params) {
    const auto v = transition_velocities(prev, curr, params);
    if (v.empty()) return std::nullopt;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

AgitationFrameResult summarize_velocities(std::span<const double> values, double tau_speed,
                                          int window) {
    AgitationFrameResult r;
    if (values.empty()) return r;
    r.n_values = static_cast<int>(values.size());
    r.cumulative_velocity = std::accumulate(values.begin(), values.end(), 0.0);
    r.mean_velocity = r.cumulative_velocity / static_cast<double>(values.size());
    r.peak_velocity = *std::max_element(values.begin(), values.end());
    r.is_agitation = r.mean_velocity > tau_speed || r.peak_velocity > tau_speed ||
                     r.cumulative_velocity > tau_speed * window;
    return r;
}

AgitationWindow::AgitationWindow(AgitationParams params) : params_(std::move(params)) {
    validate(params_);
}

AgitationFrameResult AgitationWindow::push(const KeypointFrame& frame) {
    if (last_) {
        const KeypointFrame& prev = *last_;
        if (frame.index <= prev.index || frame.timestamp_s < prev.timestamp_s) {
            throw SequencingError("frame " + std::to_string(frame.index) +
                                  " pushed after frame " + std::to_string(prev.index));
        }
        auto v = transition_velocities(prev, frame, params_);
        if (params_.pooling == VelocityPooling::aggregate && !v.empty()) {
            const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            v.assign(1, mean);
        }
        transitions_.push_back(std::move(v));
    }
    last_ = frame;
    while (transitions_.size() + 1 > static_cast<std::size_t>(params_.window)) {
        transitions_.pop_front();
    }

    AgitationFrameResult r = stats();
    r.frame_index = frame.index;
    r.timestamp_s = frame.timestamp_s;
    return r;
}

AgitationFrameResult AgitationWindow::stats() const {
    if (size() < 2) return {};
    std::vector<double> values;
    int valid_transitions = 0;
    for (const auto& t : transitions_) {
        valid_transitions += !t.empty();
        values.insert(values.end(), t.begin(), t.end());
    }
    AgitationFrameResult r = summarize_velocities(values, params_.tau_speed, params_.window);
    r.n_valid_transitions = valid_transitions;
    return r;
}

bool video_prediction(std::span<const AgitationFrameResult> results) noexcept {
    return std::any_of(results.begin(), results.end(),
                       [](const AgitationFrameResult& r) { return r.is_agitation; });
}

std::vector<AgitationFrameResult> detect_agitation(const KeypointStream& stream,
                                                   const AgitationParams& params) {
    AgitationWindow window(params);
    std::vector<AgitationFrameResult> out;
    out.reserve(stream.frames.size());
    for (const auto& f : stream.frames) out.push_back(window.push(f));
    return out;
}

}  // namespace aura
