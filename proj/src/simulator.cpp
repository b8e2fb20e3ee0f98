#include "aura/simulator.hpp"

#include "aura/error.hpp"
#include "aura/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>

// Margin checks restate the detector formulas locally; nothing here calls
// into the detectors.

namespace aura {

namespace {

using L = LandmarkId;

struct BasePoint {
    LandmarkId id;
    double x, y, z;
};

// Resting supine patient seen from the foot of the bed.
constexpr std::array<BasePoint, kLandmarkCount> kBasePose = {{
    {L::nose, 0.500, 0.260, -0.050},
    {L::eye_inner_left, 0.485, 0.235, -0.030},
    {L::eye_left, 0.475, 0.235, -0.030},
    {L::eye_outer_left, 0.465, 0.235, -0.025},
    {L::eye_inner_right, 0.515, 0.235, -0.030},
    {L::eye_right, 0.525, 0.235, -0.030},
    {L::eye_outer_right, 0.535, 0.235, -0.025},
    {L::eyebrow_left, 0.475, 0.215, -0.030},
    {L::eyebrow_right, 0.525, 0.215, -0.030},
    {L::ear_left, 0.450, 0.250, 0.000},
    {L::ear_right, 0.550, 0.250, 0.000},
    {L::mouth_left, 0.490, 0.300, -0.030},
    {L::mouth_right, 0.510, 0.300, -0.030},
    {L::shoulder_left, 0.400, 0.420, 0.020},
    {L::shoulder_right, 0.600, 0.420, 0.020},
    {L::elbow_left, 0.360, 0.620, 0.030},
    {L::elbow_right, 0.640, 0.620, 0.030},
    {L::wrist_left, 0.330, 0.800, 0.020},
    {L::wrist_right, 0.670, 0.800, 0.020},
    {L::pinky_left, 0.355, 0.855, 0.020},
    {L::pinky_right, 0.645, 0.855, 0.020},
    {L::index_left, 0.335, 0.870, 0.015},
    {L::index_right, 0.665, 0.870, 0.015},
    {L::thumb_left, 0.310, 0.840, 0.010},
    {L::thumb_right, 0.690, 0.840, 0.010},
    {L::hip_left, 0.440, 0.780, 0.050},
    {L::hip_right, 0.560, 0.780, 0.050},
    {L::knee_left, 0.450, 0.900, 0.060},
    {L::knee_right, 0.550, 0.900, 0.060},
    {L::ankle_left, 0.450, 0.980, 0.080},
    {L::ankle_right, 0.550, 0.980, 0.080},
    {L::heel_left, 0.450, 0.990, 0.090},
    {L::heel_right, 0.550, 0.990, 0.090},
    {L::foot_index_left, 0.455, 0.995, 0.060},
    {L::foot_index_right, 0.545, 0.995, 0.060},
}};

// Reference thresholds the margins are measured against.
constexpr double kTauBase = 0.3;
constexpr double kAlpha = 0.7;
constexpr double kBeta = 0.3;
constexpr double kTauScore = 0.3;
constexpr double kTauDuration = 0.3;
constexpr double kTauSpeed = 0.18;
constexpr double kTauValid = 0.7;
constexpr double kRadiusMouth = 150.0;
constexpr double kRadiusHand = 100.0;
constexpr double kLambda = 2.0;
constexpr int kWindow = 5;

constexpr double kValidVisibilityLo = 0.9;
constexpr double kQuantum = 1e-6;  // coordinates are written with 6 decimals

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double norm() const { return std::hypot(x, y, z); }
    Vec3 unit() const { return *this * (1.0 / norm()); }
};

Vec3 base(LandmarkId id) {
    const auto& b = kBasePose[static_cast<std::size_t>(id)];
    return {b.x, b.y, b.z};
}

constexpr std::array<LandmarkId, 4> kHandLeft = {L::wrist_left, L::index_left, L::pinky_left,
                                                 L::thumb_left};
constexpr std::array<LandmarkId, 4> kHandRight = {L::wrist_right, L::index_right, L::pinky_right,
                                                  L::thumb_right};
constexpr std::array<LandmarkId, 4> kLegLeft = {L::knee_left, L::ankle_left, L::heel_left,
                                                L::foot_index_left};
constexpr std::array<LandmarkId, 4> kLegRight = {L::knee_right, L::ankle_right, L::heel_right,
                                                 L::foot_index_right};

const std::array<LandmarkId, 4>& hand_points(bool left) { return left ? kHandLeft : kHandRight; }

Vec3 mean_of(std::span<const LandmarkId> ids) {
    Vec3 acc;
    for (auto id : ids) acc = acc + base(id);
    return acc * (1.0 / static_cast<double>(ids.size()));
}

double px_dist(Vec3 a, Vec3 b, int w, int h) { return std::hypot((a.x - b.x) * w, (a.y - b.y) * h); }

double round6(double v) { return std::round(v / kQuantum) * kQuantum; }

// Linear 0 -> 1 over [t0, t1], clamped.
double ramp(double t, double t0, double t1) {
    if (t <= t0) return 0.0;
    if (t >= t1) return 1.0;
    return (t - t0) / (t1 - t0);
}

// Resting-pose geometry and the worst-case effect of per-axis noise on it.
struct PoseGeometry {
    Vec3 mouth;
    double head_px = 0;
    double hand_px = 0;
    double center_shift_px = 0;  // max 2D shift of a centroid difference
    double center_shift_3d = 0;
    double size_shift_px = 0;  // max change of a pairwise pixel distance
};

PoseGeometry pose_geometry(const Scenario& sc, double perturb) {
    PoseGeometry g;
    g.mouth = mean_of(std::array{L::mouth_left, L::mouth_right});
    const int w = sc.width_px, h = sc.height_px;
    g.head_px = std::max({px_dist(base(L::ear_left), base(L::ear_right), w, h),
                          2 * px_dist(base(L::eyebrow_left), base(L::mouth_left), w, h),
                          2 * px_dist(base(L::eyebrow_right), base(L::mouth_right), w, h)});
    g.hand_px = 0;
    for (bool left : {true, false}) {
        const auto& hp = hand_points(left);
        g.hand_px = std::max({g.hand_px, px_dist(base(hp[2]), base(hp[3]), w, h),
                              px_dist(base(hp[0]), base(hp[1]), w, h)});
    }
    g.center_shift_px = 2 * perturb * std::hypot(w, h);
    g.center_shift_3d = 2 * perturb * std::sqrt(3.0);
    g.size_shift_px = 2 * perturb * std::hypot(w, h);
    return g;
}

struct ScoreBounds {
    double lo = 0, hi = 0;
};

// Collision score range for a hand centroid at `hand` given pose noise, over
// fixed (s_r = 1) and relative (lambda = 2) aura modes.
ScoreBounds score_bounds(const Scenario& sc, const PoseGeometry& g, Vec3 hand) {
    const double d2 = px_dist(hand, g.mouth, sc.width_px, sc.height_px);
    const double d3 = (hand - g.mouth).norm();
    const double d2_lo = std::max(0.0, d2 - g.center_shift_px), d2_hi = d2 + g.center_shift_px;
    const double d3_lo = std::max(0.0, d3 - g.center_shift_3d), d3_hi = d3 + g.center_shift_3d;

    const double fixed_sum = kRadiusMouth + kRadiusHand;
    const double rel_lo = kLambda * (g.head_px + g.hand_px - 2 * g.size_shift_px);
    const double rel_hi = kLambda * (g.head_px + g.hand_px + 2 * g.size_shift_px);

    auto score = [](double dd2, double rsum, double dd3) {
        return kAlpha * std::max(0.0, 1.0 - dd2 / rsum) + kBeta * std::max(0.0, 1.0 - dd3 / kTauBase);
    };
    ScoreBounds b;
    b.lo = std::min(score(d2_hi, fixed_sum, d3_hi), score(d2_hi, std::max(rel_lo, 1e-9), d3_hi));
    b.hi = std::max(score(d2_lo, fixed_sum, d3_lo), score(d2_lo, rel_hi, d3_lo));
    return b;
}

[[noreturn]] void unsatisfiable(const Scenario& sc, const std::string& why) {
    throw ValidationError("scenario " + std::string(to_string(sc.kind)) +
                          " cannot meet margin " + std::to_string(sc.margin) + ": " + why);
}

// Offsets applied on top of the resting pose at time t.
struct Motion {
    virtual ~Motion() = default;
    virtual Vec3 offset(LandmarkId id, double t, std::int64_t frame) const = 0;
};

struct Still final : Motion {
    Vec3 offset(LandmarkId, double, std::int64_t) const override { return {}; }
};

// One hand travels to just below the mouth, dwells, and returns.
struct Reach final : Motion {
    bool left = true;
    Vec3 delta;  // hand centroid displacement at full reach
    double t0 = 0, transit = 0, dwell = 0;

    double profile(double t) const {
        const double t1 = t0 + transit + dwell;
        return ramp(t, t0, t0 + transit) - ramp(t, t1, t1 + transit);
    }
    double end() const { return t0 + 2 * transit + dwell; }

    Vec3 offset(LandmarkId id, double t, std::int64_t) const override {
        const double f = profile(t);
        const auto& hp = hand_points(left);
        if (std::find(hp.begin(), hp.end(), id) != hp.end()) return delta * f;
        if (id == (left ? L::elbow_left : L::elbow_right)) return delta * (0.5 * f);
        return {};
    }
};

// Limbs swing along fixed directions with a triangle wave, one step per frame.
struct Thrash final : Motion {
    std::int64_t first = 0, last = 0;  // active frames, inclusive
    int half_period = 3;               // frames per stroke
    double step = 0.04;                // normalized units per frame
    Vec3 dir_arm_left, dir_arm_right, dir_leg_left, dir_leg_right;

    static bool in(std::span<const LandmarkId> ids, LandmarkId id) {
        return std::find(ids.begin(), ids.end(), id) != ids.end();
    }

    Vec3 offset(LandmarkId id, double, std::int64_t frame) const override {
        if (frame < first || frame > last) return {};
        const std::int64_t p = (frame - first) % (2 * half_period);
        const double amount = step * static_cast<double>(p <= half_period ? p : 2 * half_period - p);
        if (in(kHandLeft, id) || id == L::elbow_left) return dir_arm_left * amount;
        if (in(kHandRight, id) || id == L::elbow_right) return dir_arm_right * amount;
        if (in(kLegLeft, id)) return dir_leg_left * amount;
        if (in(kLegRight, id)) return dir_leg_right * amount;
        return {};
    }

    static constexpr int kMovingLandmarks = 18;
};

}  // namespace

std::string_view to_string(ScenarioKind kind) noexcept {
    switch (kind) {
        case ScenarioKind::calm: return "calm";
        case ScenarioKind::reach: return "reach";
        case ScenarioKind::restless: return "restless";
        case ScenarioKind::reach_then_calm: return "reach_then_calm";
        case ScenarioKind::staff_noise: return "staff_noise";
    }
    return "calm";
}

std::optional<ScenarioKind> scenario_kind_from_string(std::string_view name) noexcept {
    for (auto k : kScenarioKinds) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

bool expected_collision(ScenarioKind kind) noexcept {
    return kind == ScenarioKind::reach || kind == ScenarioKind::reach_then_calm;
}

bool expected_agitation(ScenarioKind kind) noexcept { return kind == ScenarioKind::restless; }

GeneratedScenario generate(const Scenario& sc) {
    if (!(sc.duration_s > 0) || !(sc.fps > 0)) throw ValidationError("duration and fps must be positive");
    if (!(sc.margin >= 1)) throw ValidationError("margin must be at least 1");
    if (!(sc.noise_amplitude >= 0)) throw ValidationError("noise amplitude must be non-negative");
    if (sc.width_px <= 0 || sc.height_px <= 0) throw ValidationError("frame dimensions must be positive");

    Rng rng(sc.seed);
    const double dt = 1.0 / sc.fps;
    const auto n_frames = static_cast<std::int64_t>(std::llround(sc.duration_s * sc.fps));
    const double perturb = sc.noise_amplitude + kQuantum;
    const PoseGeometry geom = pose_geometry(sc, perturb);
    const double noise_speed = 2 * std::sqrt(3.0) * perturb / dt;
    const auto n_landmarks = static_cast<double>(kLandmarkCount);

    // Resting hands must sit clear of the mouth aura in every aura mode.
    for (bool left : {true, false}) {
        const auto b = score_bounds(sc, geom, mean_of(hand_points(left)));
        if (b.hi > kTauScore / sc.margin) unsatisfiable(sc, "resting hand too close to mouth");
    }
    const bool expect_agitation = expected_agitation(sc.kind);
    if (!expect_agitation && noise_speed > kTauSpeed / sc.margin)
        unsatisfiable(sc, "noise amplitude produces agitation-level velocity");

    std::unique_ptr<Motion> motion = std::make_unique<Still>();
    bool staff_side_left = false;
    double staff_from = 0, staff_to = -1;

    switch (sc.kind) {
        case ScenarioKind::calm:
            break;
        case ScenarioKind::reach:
        case ScenarioKind::reach_then_calm: {
            auto r = std::make_unique<Reach>();
            r->left = rng.uniform01() < 0.5;
            const bool then_calm = sc.kind == ScenarioKind::reach_then_calm;
            r->t0 = then_calm ? 0.3 : rng.uniform(0.3, 0.7);
            r->transit = then_calm ? 1.2 : 1.5;
            r->dwell = 2 * sc.margin * kTauDuration + (then_calm ? 0.2 : 0.8);
            if (r->end() + (then_calm ? 1.0 : 0.0) > sc.duration_s)
                unsatisfiable(sc, "duration too short for reach and dwell");
            const Vec3 target = geom.mouth + Vec3{rng.uniform(-0.01, 0.01), 0.05 + rng.uniform(-0.01, 0.01), 0.02};
            r->delta = target - mean_of(hand_points(r->left));

            const auto b = score_bounds(sc, geom, target);
            if (b.lo < sc.margin * kTauScore) unsatisfiable(sc, "dwell position scores too low");
            // Four hand points at full speed, elbow at half.
            const double hand_speed = r->delta.norm() / r->transit;
            const double aggregate = 4.5 * hand_speed / n_landmarks + noise_speed;
            if (aggregate > kTauSpeed / sc.margin) unsatisfiable(sc, "reach too fast");
            motion = std::move(r);
            break;
        }
        case ScenarioKind::restless: {
            auto m = std::make_unique<Thrash>();
            m->half_period = 2 + static_cast<int>(rng.below(3));
            m->step = rng.uniform(0.040, 0.048);
            const double lead = std::min(1.0, 0.2 * sc.duration_s);
            m->first = static_cast<std::int64_t>(std::llround(lead * sc.fps));
            m->last = n_frames - 1 - m->first;
            if (m->last - m->first + 1 < kWindow) unsatisfiable(sc, "duration too short for a full window");
            // Away from the mouth, so thrashing never approaches the aura.
            m->dir_arm_left = Vec3{-0.5, 0.8, 0.1}.unit();
            m->dir_arm_right = Vec3{0.5, 0.8, 0.1}.unit();
            m->dir_leg_left = Vec3{-0.3, 0.9, 0.3}.unit();
            m->dir_leg_right = Vec3{0.3, 0.9, 0.3}.unit();
            const double aggregate =
                Thrash::kMovingLandmarks * (m->step / dt) / n_landmarks - noise_speed;
            if (aggregate < sc.margin * kTauSpeed) unsatisfiable(sc, "thrashing too slow");
            motion = std::move(m);
            break;
        }
        case ScenarioKind::staff_noise: {
            staff_side_left = rng.uniform01() < 0.5;
            staff_from = 0.4 * sc.duration_s;
            staff_to = staff_from + std::min(1.2, 0.3 * sc.duration_s);
            if (0.3 >= kTauValid / sc.margin) unsatisfiable(sc, "occluder visibility not below gate");
            break;
        }
    }

    const Vec3 global{rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02), 0.0};
    const Vec3 staff_target = geom.mouth + Vec3{0.0, 0.03, 0.0};
    const Vec3 staff_delta = staff_target - mean_of(hand_points(staff_side_left));

    GeneratedScenario out;
    out.expected_collision = expected_collision(sc.kind);
    out.expected_agitation = expect_agitation;
    out.stream.header.video_id =
        sc.video_id.empty() ? std::string(to_string(sc.kind)) + "_" + std::to_string(sc.seed) : sc.video_id;
    out.stream.header.fps = sc.fps;
    out.stream.header.width_px = sc.width_px;
    out.stream.header.height_px = sc.height_px;
    out.stream.frames.reserve(static_cast<std::size_t>(n_frames));

    const auto& staff_hand = hand_points(staff_side_left);
    for (std::int64_t i = 0; i < n_frames; ++i) {
        KeypointFrame f;
        f.index = i;
        f.timestamp_s = round6(static_cast<double>(i) * dt);
        const bool staff_burst = f.timestamp_s >= staff_from && f.timestamp_s < staff_to;
        for (const auto& bp : kBasePose) {
            Vec3 p = base(bp.id) + global + motion->offset(bp.id, f.timestamp_s, i);
            double vis = rng.uniform(kValidVisibilityLo, 1.0);
            if (staff_burst && std::find(staff_hand.begin(), staff_hand.end(), bp.id) != staff_hand.end()) {
                p = p + staff_delta;
                vis = rng.uniform(0.05, 0.3);
            }
            const double a = sc.noise_amplitude;
            p = p + Vec3{rng.uniform(-a, a), rng.uniform(-a, a), rng.uniform(-a, a)};
            f.landmarks.set(bp.id, Landmark{round6(p.x), round6(p.y), round6(p.z), round6(vis)});
        }
        out.stream.frames.push_back(std::move(f));
    }
    return out;
}

ScenarioMix ScenarioMix::study() {
    // calm, reach, restless, reach_then_calm, staff_noise out of 63.
    ScenarioMix m;
    m.weights = {12.0 / 63, 14.0 / 63, 23.0 / 63, 10.0 / 63, 4.0 / 63};
    return m;
}

ScenarioMix ScenarioMix::only(ScenarioKind kind) {
    ScenarioMix m;
    m.weights[static_cast<std::size_t>(kind)] = 1.0;
    return m;
}

std::vector<RosterEntry> label_set(std::size_t n, const ScenarioMix& mix, std::uint64_t seed) {
    const double total = std::accumulate(mix.weights.begin(), mix.weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) throw ValidationError("scenario mix must sum to 1");
    for (double w : mix.weights) {
        if (w < 0) throw ValidationError("scenario mix weights must be non-negative");
    }

    // Largest-remainder apportionment; ties go to the earlier kind.
    std::array<std::size_t, 5> counts{};
    std::array<double, 5> remainder{};
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < 5; ++k) {
        const double quota = mix.weights[k] * static_cast<double>(n);
        counts[k] = static_cast<std::size_t>(std::floor(quota + 1e-9));
        remainder[k] = quota - static_cast<double>(counts[k]);
        assigned += counts[k];
    }
    std::array<std::size_t, 5> order{0, 1, 2, 3, 4};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[order[i % 5]];

    std::vector<ScenarioKind> kinds;
    kinds.reserve(n);
    for (std::size_t k = 0; k < 5; ++k) kinds.insert(kinds.end(), counts[k], kScenarioKinds[k]);
    Rng rng(seed);
    rng.shuffle(std::span(kinds));

    std::vector<RosterEntry> roster;
    roster.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "sim_%03zu", i);
        RosterEntry e;
        e.video_id = id;
        e.scenario.kind = kinds[i];
        e.scenario.seed = derive_seed(seed, i);
        e.scenario.video_id = id;
        e.collision = expected_collision(kinds[i]);
        e.agitation = expected_agitation(kinds[i]);
        roster.push_back(std::move(e));
    }
    return roster;
}

}  // namespace aura
