#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aura {

// Anatomical landmark vocabulary. The head/hand members used by collision
// detection and body-size estimation are mandatory; the remaining body points
// only feed agitation.
enum class LandmarkId : std::uint8_t {
    nose,
    eye_inner_left,
    eye_left,
    eye_outer_left,
    eye_inner_right,
    eye_right,
    eye_outer_right,
    eyebrow_left,
    eyebrow_right,
    ear_left,
    ear_right,
    mouth_left,
    mouth_right,
    shoulder_left,
    shoulder_right,
    elbow_left,
    elbow_right,
    wrist_left,
    wrist_right,
    pinky_left,
    pinky_right,
    index_left,
    index_right,
    thumb_left,
    thumb_right,
    hip_left,
    hip_right,
    knee_left,
    knee_right,
    ankle_left,
    ankle_right,
    heel_left,
    heel_right,
    foot_index_left,
    foot_index_right,
};

inline constexpr std::size_t kLandmarkCount = 35;

std::string_view to_string(LandmarkId id) noexcept;
std::optional<LandmarkId> landmark_from_string(std::string_view name) noexcept;

// All vocabulary members in enum order.
const std::array<LandmarkId, kLandmarkCount>& all_landmarks() noexcept;

struct Landmark {
    double x = 0.0;  // fraction of frame width
    double y = 0.0;  // fraction of frame height
    double z = 0.0;  // same scale as x
    double visibility = 0.0;

    friend bool operator==(const Landmark&, const Landmark&) = default;
};

struct PixelPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

struct StreamHeader {
    std::string video_id;
    double fps = 25.0;
    int width_px = 1280;
    int height_px = 720;
    // Free-form JSON text carried through unchanged (pose adapters stamp
    // estimator provenance here). Empty when absent.
    std::string provenance;

    double default_dt() const noexcept { return 1.0 / fps; }

    friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

// Partial landmark map; absent entries are "not detected".
class LandmarkMap {
public:
    const Landmark* find(LandmarkId id) const noexcept {
        const auto& slot = slots_[static_cast<std::size_t>(id)];
        return slot ? &*slot : nullptr;
    }
    bool contains(LandmarkId id) const noexcept { return find(id) != nullptr; }
    void set(LandmarkId id, const Landmark& lm) { slots_[static_cast<std::size_t>(id)] = lm; }
    void erase(LandmarkId id) { slots_[static_cast<std::size_t>(id)].reset(); }
    std::size_t size() const noexcept;
    bool empty() const noexcept { return size() == 0; }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = 0; i < kLandmarkCount; ++i) {
            if (slots_[i]) fn(static_cast<LandmarkId>(i), *slots_[i]);
        }
    }

    friend bool operator==(const LandmarkMap&, const LandmarkMap&) = default;

private:
    std::array<std::optional<Landmark>, kLandmarkCount> slots_{};
};

struct KeypointFrame {
    std::int64_t index = 0;
    double timestamp_s = 0.0;
    LandmarkMap landmarks;

    friend bool operator==(const KeypointFrame&, const KeypointFrame&) = default;
};

struct KeypointStream {
    StreamHeader header;
    std::vector<KeypointFrame> frames;

    // Nominal duration: frame count over fps.
    double duration_s() const noexcept {
        return static_cast<double>(frames.size()) / header.fps;
    }

    friend bool operator==(const KeypointStream&, const KeypointStream&) = default;
};

// Throws ValidationError if the header breaks its invariants.
void validate(const StreamHeader& header);
void validate(const Landmark& lm, LandmarkId id);
// Checks the pairwise ordering of two consecutive frames.
void validate_order(const KeypointFrame& prev, const KeypointFrame& next);

// Parses the newline-delimited stream format. Throws ParseError for malformed
// records and ValidationError for invariant violations.
KeypointStream parse_stream(std::string_view source);
KeypointStream parse_stream(std::istream& in);
KeypointStream load_stream(const std::string& path);

std::string serialize_header(const StreamHeader& header);
std::string serialize_frame(const KeypointFrame& frame);
std::string serialize_stream(const KeypointStream& stream);

PixelPoint to_pixels(const Landmark& lm, const StreamHeader& header) noexcept;

// Inclusive gate: visibility at the threshold passes.
inline bool is_valid(const Landmark& lm, double tau_valid) noexcept {
    return lm.visibility >= tau_valid;
}

// Looks up a landmark and returns it only when present and valid.
inline const Landmark* valid_landmark(const KeypointFrame& frame, LandmarkId id,
                                      double tau_valid) noexcept {
    const Landmark* lm = frame.landmarks.find(id);
    return (lm && is_valid(*lm, tau_valid)) ? lm : nullptr;
}

}  // namespace aura
