#pragma once

// Frame builders shared by the unit and acceptance tests.

#include "aura/keypoint_stream.hpp"

#include <initializer_list>
#include <utility>

namespace aura::test {

inline Landmark lm(double x, double y, double z = 0.0, double vis = 1.0) { return {x, y, z, vis}; }

inline KeypointFrame frame(std::int64_t index, double t,
                           std::initializer_list<std::pair<LandmarkId, Landmark>> points = {}) {
    KeypointFrame f;
    f.index = index;
    f.timestamp_s = t;
    for (const auto& [id, l] : points) f.landmarks.set(id, l);
    return f;
}

inline StreamHeader header(double fps = 25.0, int w = 1280, int h = 720) {
    StreamHeader hd;
    hd.video_id = "test";
    hd.fps = fps;
    hd.width_px = w;
    hd.height_px = h;
    return hd;
}

// Mouth corners at (0.49, 0.30) / (0.51, 0.30); left wrist either on the mouth
// (score 1) or far away in the lower corner (score 0).
inline KeypointFrame contact_frame(std::int64_t index, double t, bool touching) {
    const double hx = touching ? 0.5 : 0.95;
    const double hy = touching ? 0.3 : 0.95;
    const double hz = touching ? 0.0 : 0.9;
    return frame(index, t,
                 {{LandmarkId::mouth_left, lm(0.49, 0.30)},
                  {LandmarkId::mouth_right, lm(0.51, 0.30)},
                  {LandmarkId::wrist_left, lm(hx, hy, hz)}});
}

// Stream of frames at 25 fps whose touching pattern follows `pattern`.
template <typename Range>
KeypointStream contact_stream(const Range& pattern, double fps = 25.0) {
    KeypointStream s;
    s.header = header(fps);
    std::int64_t i = 0;
    for (bool touching : pattern) {
        s.frames.push_back(contact_frame(i, static_cast<double>(i) / fps, touching));
        ++i;
    }
    return s;
}

}  // namespace aura::test
