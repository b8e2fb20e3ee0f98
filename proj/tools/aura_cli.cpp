// aura: command-line front end for the extubation-risk engine.

#include "aura/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

using aura::AuraMode;

void add_mode_flags(CLI::App* cmd, aura::cli::ModeOverrides& o) {
    const std::map<std::string, AuraMode::Kind> kinds{{"fixed", AuraMode::Kind::fixed},
                                                      {"relative", AuraMode::Kind::relative}};
    cmd->add_option("--mode", o.mode, "aura sizing: fixed|relative")
        ->transform(CLI::CheckedTransformer(kinds, CLI::ignore_case));
    cmd->add_option("--lambda", o.lambda, "relative-mode scale factor");
    cmd->add_option("--s-r", o.s_r, "fixed-mode radius multiplier");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aura: hand-to-mouth collision and agitation detection on keypoint streams"};
    app.require_subcommand(1);

    aura::cli::DetectOptions det;
    auto* detect = app.add_subcommand("detect", "run both detectors on one keypoint stream");
    detect->add_option("input", det.input, "keypoint stream (.jsonl)")->required()->check(CLI::ExistingFile);
    detect->add_option("--config", det.config, "key=value config file")->check(CLI::ExistingFile);
    detect->add_option("--output", det.output, "events file")->required();
    detect->add_option("--annotations", det.annotations, "also write per-frame overlay records here");
    add_mode_flags(detect, det.overrides);

    aura::cli::AnnotateOptions ann;
    auto* annotate = app.add_subcommand("annotate-only", "write per-frame overlay records only");
    annotate->add_option("input", ann.input, "keypoint stream (.jsonl)")->required()->check(CLI::ExistingFile);
    annotate->add_option("--config", ann.config, "key=value config file")->check(CLI::ExistingFile);
    annotate->add_option("--output", ann.output, "annotation file")->required();
    add_mode_flags(annotate, ann.overrides);

    aura::cli::PredictOptions pred;
    auto* predict = app.add_subcommand("predict", "video-level predictions for a directory of streams");
    predict->add_option("streams", pred.streams_dir, "directory of <video_id>.jsonl")->required();
    predict->add_option("--config", pred.config, "key=value config file")->check(CLI::ExistingFile);
    predict->add_option("--output", pred.output, "predictions CSV")->required();
    add_mode_flags(predict, pred.overrides);

    aura::cli::SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic stream with known labels");
    simulate->add_option("--kind", sim.kind, "calm|reach|restless|reach_then_calm|staff_noise");
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--duration", sim.duration_s, "seconds");
    simulate->add_option("--fps", sim.fps);
    simulate->add_option("--margin", sim.margin);
    simulate->add_option("--noise", sim.noise, "per-axis noise amplitude, normalized units");
    simulate->add_option("--width", sim.width_px);
    simulate->add_option("--height", sim.height_px);
    simulate->add_option("--roster", sim.roster, "write N labeled streams into the --output directory");
    simulate->add_option("--output", sim.output, "stream file, or directory with --roster")->required();

    aura::cli::EvaluateOptions ev;
    auto* evaluate = app.add_subcommand("evaluate", "metrics with bootstrap intervals");
    evaluate->add_option("predictions", ev.predictions, "predictions CSV")->required()->check(CLI::ExistingFile);
    evaluate->add_option("labels", ev.labels, "ground-truth CSV")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--config", ev.config, "key=value config file")->check(CLI::ExistingFile);
    evaluate->add_option("--bootstrap", ev.bootstrap, "replicates B");
    evaluate->add_option("--seed", ev.seed);
    evaluate->add_option("--output", ev.output, "metrics report")->required();

    aura::cli::TuneOptions tn;
    auto* tune = app.add_subcommand("tune", "three-fold grid search");
    tune->add_option("streams", tn.streams_dir, "directory of <video_id>.jsonl")->required();
    tune->add_option("labels", tn.labels, "ground-truth CSV")->required()->check(CLI::ExistingFile);
    tune->add_option("--config", tn.config, "key=value config file")->check(CLI::ExistingFile);
    tune->add_option("--grid-param", tn.grid_params, "vary only these: tau_speed, tau_valid, s_r");
    tune->add_option("--seed", tn.seed, "fold assignment seed");
    tune->add_flag("--stratify", tn.stratify, "deal folds per label stratum");
    tune->add_option("--threads", tn.threads, "worker threads, 0 = hardware");
    tune->add_option("--output", tn.output, "tuning report")->required();
    add_mode_flags(tune, tn.overrides);

    aura::cli::IccOptions ic;
    auto* icc = app.add_subcommand("icc", "ICC(3,k) of an expert rating matrix");
    icc->add_option("ratings", ic.ratings, "CSV subject,r1,...")->required()->check(CLI::ExistingFile);
    icc->add_option("--output", ic.output, "result JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? aura::cli::kSuccess : aura::cli::kUsageError;
    }

    if (*detect) return aura::cli::detect(det, std::cerr);
    if (*annotate) return aura::cli::annotate_only(ann, std::cerr);
    if (*predict) return aura::cli::predict(pred, std::cerr);
    if (*simulate) return aura::cli::simulate(sim, std::cerr);
    if (*evaluate) return aura::cli::evaluate(ev, std::cerr);
    if (*tune) return aura::cli::tune(tn, std::cerr);
    if (*icc) return aura::cli::icc(ic, std::cerr);
    return aura::cli::kUsageError;
}
