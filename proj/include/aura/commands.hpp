#pragma once

#include "aura/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace aura::cli {

// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kInputError = 2,
    kInternalError = 3,
};

// Optional overrides of the loaded config's aura settings.
struct ModeOverrides {
    std::optional<AuraMode::Kind> mode;
    std::optional<double> lambda;
    std::optional<double> s_r;
};

struct DetectOptions {
    std::string input;
    std::string config;  // empty: defaults
    std::string output;  // events file
    std::string annotations;  // empty: none
    ModeOverrides overrides;
};

struct AnnotateOptions {
    std::string input;
    std::string config;
    std::string output;
    ModeOverrides overrides;
};

struct PredictOptions {
    std::string streams_dir;
    std::string config;
    std::string output;  // label CSV of predictions
    ModeOverrides overrides;
};

struct SimulateOptions {
    std::string kind = "calm";
    double duration_s = 6.0;
    double fps = 25.0;
    std::uint64_t seed = 0;
    double margin = 2.0;
    double noise = 0.0003;
    int width_px = 1280;
    int height_px = 720;
    std::size_t roster = 0;  // > 0: write a roster of this size into `output` as a directory
    std::string output;
};

struct EvaluateOptions {
    std::string predictions;
    std::string labels;
    std::string config;
    std::optional<int> bootstrap;
    std::optional<std::uint64_t> seed;
    std::string output;
};

struct TuneOptions {
    std::string streams_dir;
    std::string labels;
    std::string config;
    std::vector<std::string> grid_params;  // empty: all three axes
    std::uint64_t seed = 0;
    bool stratify = false;
    unsigned threads = 0;
    std::string output;
    ModeOverrides overrides;
};

struct IccOptions {
    std::string ratings;
    std::string output;
};

// Each command reports failures on `err` and returns an ExitCode.
int detect(const DetectOptions& o, std::ostream& err);
int annotate_only(const AnnotateOptions& o, std::ostream& err);
int predict(const PredictOptions& o, std::ostream& err);
int simulate(const SimulateOptions& o, std::ostream& err);
int evaluate(const EvaluateOptions& o, std::ostream& err);
int tune(const TuneOptions& o, std::ostream& err);
int icc(const IccOptions& o, std::ostream& err);

}  // namespace aura::cli
