#pragma once

#include "aura/keypoint_stream.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aura {

enum class ScenarioKind { calm, reach, restless, reach_then_calm, staff_noise };

inline constexpr std::array<ScenarioKind, 5> kScenarioKinds = {
    ScenarioKind::calm, ScenarioKind::reach, ScenarioKind::restless,
    ScenarioKind::reach_then_calm, ScenarioKind::staff_noise};

std::string_view to_string(ScenarioKind kind) noexcept;
std::optional<ScenarioKind> scenario_kind_from_string(std::string_view name) noexcept;

// Synthetic patient scenario. `margin` is the factor by which the generated
// motion clears (or stays clear of) the default detector thresholds; from 2
// upward the labels also survive the +/-10% tuning grid.
struct Scenario {
    ScenarioKind kind = ScenarioKind::calm;
    double duration_s = 6.0;
    double fps = 25.0;
    std::uint64_t seed = 0;
    double noise_amplitude = 0.0003;  // bounded-uniform, per axis, normalized units
    double margin = 2.0;
    int width_px = 1280;
    int height_px = 720;
    std::string video_id;  // defaults to "<kind>_<seed>"
};

struct GeneratedScenario {
    KeypointStream stream;
    bool expected_collision = false;
    bool expected_agitation = false;
};

// Deterministic for a fixed scenario. Throws ValidationError when the
// requested margin cannot be met (noise too large, duration too short).
GeneratedScenario generate(const Scenario& scenario);

// Kind proportions for a roster; must sum to 1.
struct ScenarioMix {
    std::array<double, 5> weights{};  // indexed like kScenarioKinds

    // 63-video prevalence: 24 collision-positive, 23 agitation-positive.
    static ScenarioMix study();
    static ScenarioMix only(ScenarioKind kind);
};

struct RosterEntry {
    std::string video_id;
    Scenario scenario;
    bool collision = false;
    bool agitation = false;
};

// Kind counts come from largest-remainder apportionment of n over the mix;
// the roster order and per-entry seeds are shuffled/derived from `seed`.
std::vector<RosterEntry> label_set(std::size_t n, const ScenarioMix& mix, std::uint64_t seed);

// Labels a scenario kind carries by construction.
bool expected_collision(ScenarioKind kind) noexcept;
bool expected_agitation(ScenarioKind kind) noexcept;

}  // namespace aura
