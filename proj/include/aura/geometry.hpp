#pragma once

#include "aura/keypoint_stream.hpp"

#include <optional>

namespace aura {

// Normalized 3D point (same units as Landmark x/y/z).
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;
};

enum class HandSide { left, right };

inline constexpr std::array<HandSide, 2> kHandSides = {HandSide::left, HandSide::right};

std::string_view to_string(HandSide side) noexcept;

double dist_2d(PixelPoint a, PixelPoint b) noexcept;
double dist_3d(Point3 a, Point3 b) noexcept;

// Mouth and hand anchor points. A hand center exists only when its wrist is
// valid; the mouth center needs at least one valid mouth corner.
struct AnchorSet {
    std::optional<PixelPoint> mouth_center;
    std::optional<PixelPoint> hand_center_left;
    std::optional<PixelPoint> hand_center_right;
    std::optional<Point3> mouth_center_3d;
    std::optional<Point3> hand_center_left_3d;
    std::optional<Point3> hand_center_right_3d;

    const std::optional<PixelPoint>& hand_center(HandSide s) const noexcept {
        return s == HandSide::left ? hand_center_left : hand_center_right;
    }
    const std::optional<Point3>& hand_center_3d(HandSide s) const noexcept {
        return s == HandSide::left ? hand_center_left_3d : hand_center_right_3d;
    }
};

AnchorSet anchors(const KeypointFrame& frame, const StreamHeader& header, double tau_valid);

// Body-size estimates in pixels; nullopt when no constituent pair is valid.
std::optional<double> head_size(const KeypointFrame& frame, const StreamHeader& header,
                                double tau_valid);
std::optional<double> hand_size(const KeypointFrame& frame, const StreamHeader& header,
                                double tau_valid);

struct AuraMode {
    enum class Kind { fixed, relative };

    Kind kind = Kind::fixed;
    double lambda = 2.0;  // relative mode: radius = lambda * body size
    double s_r = 1.0;     // fixed mode: radius = s_r * base radius

    friend bool operator==(const AuraMode&, const AuraMode&) = default;
};

std::string_view to_string(AuraMode::Kind kind) noexcept;

// Throws ValidationError unless lambda > 0 and s_r > 0.
void validate(const AuraMode& mode);

struct AuraRadii {
    double mouth = 0.0;  // r_m, pixels
    double hand = 0.0;   // r_h, pixels
    // Relative mode only: set when the body size was unavailable and the fixed
    // radius was used instead.
    bool mouth_fallback = false;
    bool hand_fallback = false;
};

AuraRadii aura_radii(const AuraMode& mode, double r_m_base, double r_h_base,
                     std::optional<double> head, std::optional<double> hand) noexcept;

}  // namespace aura
