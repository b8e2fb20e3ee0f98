#include "aura/commands.hpp"

#include "aura/engine.hpp"
#include "aura/error.hpp"
#include "aura/reliability.hpp"
#include "aura/report.hpp"
#include "aura/simulator.hpp"
#include "aura/tuning.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <exception>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <ostream>

namespace aura::cli {

namespace {

namespace fs = std::filesystem;

// Maps exceptions onto exit codes so every command reports the same way.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

EngineConfig load(const std::string& path, const ModeOverrides& o) {
    EngineConfig c = path.empty() ? EngineConfig{} : load_config(path);
    auto& mode = c.detector.collision.mode;
    if (o.mode) mode.kind = *o.mode;
    if (o.lambda) mode.lambda = *o.lambda;
    if (o.s_r) mode.s_r = *o.s_r;
    validate(c.detector);
    return c;
}

void require_output(const std::string& path) {
    if (path.empty()) throw ValidationError("--output is required");
}

// Sorted *.jsonl files of a directory, keyed by file stem.
std::map<std::string, fs::path> stream_files(const std::string& dir) {
    if (!fs::is_directory(dir)) throw ValidationError("not a directory: " + dir);
    std::map<std::string, fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
            out.emplace(entry.path().stem().string(), entry.path());
    }
    return out;
}

std::string missing_list(const std::vector<std::string>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? ", " : "") + ids[i];
    return s;
}

}  // namespace

int detect(const DetectOptions& o, std::ostream& err) {
    return guarded(err, [&] {
        require_output(o.output);
        const EngineConfig config = load(o.config, o.overrides);
        const KeypointStream stream = load_stream(o.input);
        const DetectionResult result = run_detection(stream, config.detector);
        write_file_atomic(o.output, events_jsonl(stream.header, result));
        if (!o.annotations.empty()) write_file_atomic(o.annotations, annotations_jsonl(annotate(result)));
        return int(kSuccess);
    });
}

int annotate_only(const AnnotateOptions& o, std::ostream& err) {
    return guarded(err, [&] {
        require_output(o.output);
        const EngineConfig config = load(o.config, o.overrides);
        const KeypointStream stream = load_stream(o.input);
        write_file_atomic(o.output, annotations_jsonl(annotate(run_detection(stream, config.detector))));
        return int(kSuccess);
    });
}

int predict(const PredictOptions& o, std::ostream& err) {
    return guarded(err, [&] {
        require_output(o.output);
        const EngineConfig config = load(o.config, o.overrides);
        const auto files = stream_files(o.streams_dir);
        if (files.empty()) throw ValidationError("no .jsonl streams in " + o.streams_dir);
        std::map<std::string, VideoPrediction> preds;
        for (const auto& [id, path] : files) {
            try {
                preds[id] = predict_video(load_stream(path.string()), config.detector);
            } catch (const Error& e) {
                throw ValidationError(path.string() + ": " + e.what());
            }
        }
        write_file_atomic(o.output, label_csv(preds));
        return int(kSuccess);
    });
}

int simulate(const SimulateOptions& o, std::ostream& err) {
    return guarded(err, [&] {
        require_output(o.output);
        auto fill = [&](Scenario& s) {
            s.duration_s = o.duration_s;
            s.fps = o.fps;
            s.margin = o.margin;
            s.noise_amplitude = o.noise;
            s.width_px = o.width_px;
            s.height_px = o.height_px;
        };
        if (o.roster > 0) {
            fs::create_directories(o.output);
            auto roster = label_set(o.roster, ScenarioMix::study(), o.seed);
            std::map<std::string, VideoPrediction> labels;
            for (auto& entry : roster) {
                fill(entry.scenario);
                const GeneratedScenario g = generate(entry.scenario);
                write_file_atomic((fs::path(o.output) / (entry.video_id + ".jsonl")).string(),
                                  serialize_stream(g.stream));
                labels[entry.video_id] = {g.expected_collision, g.expected_agitation};
            }
            write_file_atomic((fs::path(o.output) / "labels.csv").string(), label_csv(labels));
            return int(kSuccess);
        }
        const auto kind = scenario_kind_from_string(o.kind);
        if (!kind) {
            err << "error: unknown scenario kind \"" << o.kind << "\"\n";
            return int(kUsageError);
        }
        Scenario s;
        s.kind = *kind;
        s.seed = o.seed;
        fill(s);
        const GeneratedScenario g = generate(s);
        write_file_atomic(o.output, serialize_stream(g.stream));
        nlohmann::ordered_json sidecar;
        sidecar["video_id"] = g.stream.header.video_id;
        sidecar["kind"] = std::string(to_string(s.kind));
        sidecar["seed"] = s.seed;
        sidecar["collision"] = g.expected_collision;
        sidecar["agitation"] = g.expected_agitation;
        fs::path side(o.output);
        side.replace_extension(".labels.json");
        write_file_atomic(side.string(), sidecar.dump() + '\n');
        return int(kSuccess);
    });
}

int evaluate(const EvaluateOptions& o, std::ostream& err) {
    return guarded(err, [&] {
        require_output(o.output);
        const EngineConfig config = o.config.empty() ? EngineConfig{} : load_config(o.config);
        const int b = o.bootstrap.value_or(config.bootstrap);
        const std::uint64_t seed = o.seed.value_or(config.seed);
        if (b < 1) throw ValidationError("bootstrap replicates must be >= 1");
        const auto preds = load_label_csv(o.predictions);
        const auto labels = load_label_csv(o.labels);
        if (labels.empty()) throw ValidationError("label file has no rows");
        std::vector<std::string> no_pred, no_label;
        for (const auto& [id, _] : labels)
            if (!preds.contains(id)) no_pred.push_back(id);
        for (const auto& [id, _] : preds)
            if (!labels.contains(id)) no_label.push_back(id);
        if (!no_pred.empty() || !no_label.empty()) {
            std::string msg = "video ids do not align";
            if (!no_pred.empty()) msg += "; missing predictions: " + missing_list(no_pred);
            if (!no_label.empty()) msg += "; missing labels: " + missing_list(no_label);
            throw ValidationError(msg);
        }
        std::map<std::string, std::vector<CiEstimate>> report;
        for (const bool collision : {true, false}) {
            std::vector<LabeledPrediction> rows;
            for (const auto& [id, truth] : labels) {
                const auto& p = preds.at(id);
                rows.push_back({id, collision ? p.collision : p.agitation,
                                collision ? truth.collision : truth.agitation});
            }
            auto& out = report[collision ? "collision" : "agitation"];
            for (Metric m : kAllMetrics) {
                try {
                    out.push_back(bootstrap_ci(rows, m, b, seed));
                } catch (const DomainError&) {
                    // Metric undefined on every replicate (e.g. no positives): report it as null.
                    CiEstimate e;
                    e.metric = m;
                    e.replicates = b;
                    e.skipped = b;
                    e.seed = seed;
                    e.lo = e.hi = std::numeric_limits<double>::quiet_NaN();
                    out.push_back(e);
                }
            }
        }
        write_file_atomic(o.output, evaluation_jsonl(report));
        return int(kSuccess);
    });
}

int tune(const TuneOptions& o, std::ostream& err) {
    return guarded(err, [&] {
        require_output(o.output);
        const EngineConfig config = load(o.config, o.overrides);
        const auto labels = load_label_csv(o.labels);
        if (labels.size() < 2 * kFoldCount)
            throw ValidationError("tuning needs at least 6 labeled videos, got " + std::to_string(labels.size()));
        if (labels.size() != kStudyVideoCount) {
            err << "warning: " << labels.size()
                << " labeled videos; the three-fold protocol was laid out for 63\n";
        }
        bool speed = o.grid_params.empty(), valid = speed, sr = speed;
        for (const auto& p : o.grid_params) {
            if (p == "tau_speed") speed = true;
            else if (p == "tau_valid") valid = true;
            else if (p == "s_r") sr = true;
            else throw ValidationError("unknown grid parameter \"" + p + "\" (tau_speed, tau_valid, s_r)");
        }

        std::vector<LabeledStream> videos;
        std::vector<std::string> ids;
        std::vector<int> strata;
        for (const auto& [id, truth] : labels) {
            const fs::path path = fs::path(o.streams_dir) / (id + ".jsonl");
            LabeledStream v;
            v.video_id = id;
            try {
                v.stream = load_stream(path.string());
            } catch (const Error& e) {
                throw ValidationError(path.string() + ": " + e.what());
            }
            v.collision = truth.collision;
            v.agitation = truth.agitation;
            ids.push_back(id);
            strata.push_back(int(truth.collision) * 2 + int(truth.agitation));
            videos.push_back(std::move(v));
        }

        FoldOptions fold_opts;
        fold_opts.exact_study_size = false;
        if (o.stratify) fold_opts.strata = strata;
        const FoldPlan plan = make_folds(ids, o.seed, fold_opts);
        const TuningConfig base{config.detector.agitation.tau_speed, config.detector.agitation.tau_valid,
                                config.detector.collision.mode.s_r};
        const auto grid = enumerate_grid(GridSpec::around(base, speed, valid, sr));
        const TuningReport report = run_folds(plan, grid, videos, config.detector, o.threads);
        write_file_atomic(o.output, tuning_jsonl(report));
        return int(kSuccess);
    });
}

int icc(const IccOptions& o, std::ostream& err) {
    return guarded(err, [&] {
        require_output(o.output);
        const RatingMatrix m = load_ratings_csv(o.ratings);
        write_file_atomic(o.output, icc_json(icc_3k(m), m.subjects(), m.raters()));
        return int(kSuccess);
    });
}

}  // namespace aura::cli
