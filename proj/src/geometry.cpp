#include "aura/geometry.hpp"

#include "aura/error.hpp"

#include <algorithm>
#include <cmath>

namespace aura {

namespace {

struct Accumulator {
    double px = 0, py = 0, x = 0, y = 0, z = 0;
    int n = 0;

    void add(const Landmark& lm, const StreamHeader& header) {
        const PixelPoint p = to_pixels(lm, header);
        px += p.x;
        py += p.y;
        x += lm.x;
        y += lm.y;
        z += lm.z;
        ++n;
    }
    PixelPoint pixel() const { return {px / n, py / n}; }
    Point3 normalized() const { return {x / n, y / n, z / n}; }
};

std::optional<double> pixel_distance(const KeypointFrame& frame, const StreamHeader& header,
                                     LandmarkId a, LandmarkId b, double tau_valid) {
    const Landmark* la = valid_landmark(frame, a, tau_valid);
    const Landmark* lb = valid_landmark(frame, b, tau_valid);
    if (!la || !lb) return std::nullopt;
    return dist_2d(to_pixels(*la, header), to_pixels(*lb, header));
}

void take_max(std::optional<double>& acc, std::optional<double> v) {
    if (v && (!acc || *v > *acc)) acc = v;
}

struct HandIds {
    LandmarkId wrist, index, pinky, thumb;
};

constexpr HandIds hand_ids(HandSide side) {
    return side == HandSide::left
               ? HandIds{LandmarkId::wrist_left, LandmarkId::index_left, LandmarkId::pinky_left,
                         LandmarkId::thumb_left}
               : HandIds{LandmarkId::wrist_right, LandmarkId::index_right, LandmarkId::pinky_right,
                         LandmarkId::thumb_right};
}

}  // namespace

std::string_view to_string(HandSide side) noexcept {
    return side == HandSide::left ? "left" : "right";
}

std::string_view to_string(AuraMode::Kind kind) noexcept {
    return kind == AuraMode::Kind::fixed ? "fixed" : "relative";
}

double dist_2d(PixelPoint a, PixelPoint b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

double dist_3d(Point3 a, Point3 b) noexcept {
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

AnchorSet anchors(const KeypointFrame& frame, const StreamHeader& header, double tau_valid) {
    AnchorSet out;

    Accumulator mouth;
    for (auto id : {LandmarkId::mouth_left, LandmarkId::mouth_right}) {
        if (const Landmark* lm = valid_landmark(frame, id, tau_valid)) mouth.add(*lm, header);
    }
    if (mouth.n > 0) {
        out.mouth_center = mouth.pixel();
        out.mouth_center_3d = mouth.normalized();
    }

    for (HandSide side : kHandSides) {
        const HandIds ids = hand_ids(side);
        if (!valid_landmark(frame, ids.wrist, tau_valid)) continue;
        Accumulator hand;
        for (auto id : {ids.wrist, ids.index, ids.pinky, ids.thumb}) {
            if (const Landmark* lm = valid_landmark(frame, id, tau_valid)) hand.add(*lm, header);
        }
        if (side == HandSide::left) {
            out.hand_center_left = hand.pixel();
            out.hand_center_left_3d = hand.normalized();
        } else {
            out.hand_center_right = hand.pixel();
            out.hand_center_right_3d = hand.normalized();
        }
    }
    return out;
}

std::optional<double> head_size(const KeypointFrame& frame, const StreamHeader& header,
                                double tau_valid) {
    std::optional<double> size =
        pixel_distance(frame, header, LandmarkId::ear_left, LandmarkId::ear_right, tau_valid);
    for (auto [brow, mouth] : {std::pair{LandmarkId::eyebrow_left, LandmarkId::mouth_left},
                               std::pair{LandmarkId::eyebrow_right, LandmarkId::mouth_right}}) {
        auto d = pixel_distance(frame, header, brow, mouth, tau_valid);
        if (d) *d *= 2.0;
        take_max(size, d);
    }
    return size;
}

std::optional<double> hand_size(const KeypointFrame& frame, const StreamHeader& header,
                                double tau_valid) {
    std::optional<double> size;
    for (HandSide side : kHandSides) {
        const HandIds ids = hand_ids(side);
        take_max(size, pixel_distance(frame, header, ids.pinky, ids.thumb, tau_valid));
        take_max(size, pixel_distance(frame, header, ids.wrist, ids.index, tau_valid));
    }
    return size;
}

void validate(const AuraMode& mode) {
    if (!(mode.lambda > 0.0) || !std::isfinite(mode.lambda))
        throw ValidationError("lambda must be positive");
    if (!(mode.s_r > 0.0) || !std::isfinite(mode.s_r)) throw ValidationError("s_r must be positive");
}

AuraRadii aura_radii(const AuraMode& mode, double r_m_base, double r_h_base,
                     std::optional<double> head, std::optional<double> hand) noexcept {
    const double fixed_m = mode.s_r * r_m_base;
    const double fixed_h = mode.s_r * r_h_base;
    if (mode.kind == AuraMode::Kind::fixed) return {fixed_m, fixed_h, false, false};

    // A zero size (coincident landmarks) cannot define an aura.
    if (head && !(*head > 0.0)) head.reset();
    if (hand && !(*hand > 0.0)) hand.reset();
    AuraRadii r;
    r.mouth_fallback = !head.has_value();
    r.hand_fallback = !hand.has_value();
    r.mouth = head ? mode.lambda * *head : fixed_m;
    r.hand = hand ? mode.lambda * *hand : fixed_h;
    return r;
}

}  // namespace aura
