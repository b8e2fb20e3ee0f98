// Acceptance checks, one line per criterion:
//   acceptance            run all, exit 1 if any fails
//   acceptance N [N...]   run only the listed criteria

#include "aura/collision.hpp"
#include "aura/engine.hpp"
#include "aura/metrics.hpp"
#include "aura/random.hpp"
#include "aura/reliability.hpp"
#include "aura/report.hpp"
#include "aura/simulator.hpp"
#include "aura/tuning.hpp"
#include "../support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace aura;

namespace {

// Pinned tolerances and limits.
constexpr double kScoreExact = 0.0;           // boundary values must be exact
constexpr double kMetricTolerance = 0.005;    // point estimates vs the reference values
constexpr double kCiEndpointSlack = 0.05;     // bootstrap interval endpoints
constexpr double kIccTolerance = 1e-9;
constexpr double kScaleTolerance = 1e-9;
constexpr double kDeviationBound = 0.05;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> run;
};

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

// 1 ------------------------------------------------------------------------
Outcome score_functions() {
    Rng rng(1001);
    const double r_h = 100, r_m = 150, tau_base = 0.3;
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const double a = rng.uniform(0, 600), b = rng.uniform(0, 600);
        const double oa = overlap_score(std::min(a, b), r_h, r_m), ob = overlap_score(std::max(a, b), r_h, r_m);
        const double c = rng.uniform(0, 1), d = rng.uniform(0, 1);
        const double pa = proximity_score(std::min(c, d), tau_base), pb = proximity_score(std::max(c, d), tau_base);
        for (double v : {oa, ob, pa, pb}) bad += !(v >= 0.0 && v <= 1.0);
        bad += oa < ob;
        bad += pa < pb;
    }
    const bool exact = overlap_score(0, r_h, r_m) == 1.0 && proximity_score(0, tau_base) == 1.0 &&
                       std::abs(overlap_score(r_h + r_m, r_h, r_m) - 0.0) <= kScoreExact &&
                       std::abs(proximity_score(tau_base, tau_base) - 0.0) <= kScoreExact;
    return {bad == 0 && exact, "10000 draws, " + std::to_string(bad) + " violations, boundary values " +
                                   (exact ? "exact" : "NOT exact")};
}

// 2 ------------------------------------------------------------------------
Outcome persistence() {
    int failures = 0, cases = 0;
    auto expect = [&](const std::vector<bool>& p, std::size_t want) {
        ++cases;
        failures += detect_collisions(aura::test::contact_stream(p), {}).size() != want;
    };
    // Boundary pair: 8 frames span 0.28 s, 9 frames span 0.32 s.
    std::vector<bool> eight(8, true), nine(9, true);
    eight.push_back(false);
    nine.push_back(false);
    expect(eight, 0);
    expect(nine, 1);
    const auto ev = detect_collisions(aura::test::contact_stream(nine), {});
    const bool at_032 = ev.size() == 1 && std::abs(ev[0].confirmed_s - 0.32) < 1e-12;

    // Random concatenations of runs; expected count from run lengths.
    Rng rng(2002);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<bool> p;
        std::size_t want = 0;
        while (p.size() < 150) {
            const std::size_t len = 1 + rng.below(20);
            const bool on = rng.below(2) == 1;
            if (on && !p.empty() && p.back()) p.push_back(false);  // keep runs maximal
            p.insert(p.end(), len, on);
            if (on && (len - 1) / 25.0 > 0.3) ++want;
        }
        expect(p, want);
    }
    return {failures == 0 && at_032, std::to_string(cases) + " sequences, " + std::to_string(failures) +
                                          " mismatches, 9-frame confirmation at " +
                                          (ev.empty() ? std::string("none") : fmt(ev[0].confirmed_s)) + " s"};
}

// 3 ------------------------------------------------------------------------
Outcome oracle() {
    constexpr int kSeeds = 100;
    int runs = 0, disagreements = 0;
    for (const auto kind : {AuraMode::Kind::fixed, AuraMode::Kind::relative}) {
        DetectorParams p;
        p.collision.mode.kind = kind;
        p.collision.mode.lambda = 2.0;
        for (ScenarioKind k : kScenarioKinds) {
            for (int seed = 0; seed < kSeeds; ++seed) {
                Scenario s;
                s.kind = k;
                s.seed = derive_seed(3003, static_cast<std::uint64_t>(seed));
                s.margin = 2.0;
                const auto g = generate(s);
                const auto pred = predict_video(g.stream, p);
                ++runs;
                disagreements += pred.collision != g.expected_collision || pred.agitation != g.expected_agitation;
            }
        }
    }
    return {disagreements == 0, std::to_string(runs) + " scenarios (5 kinds x 100 seeds x 2 modes), " +
                                    std::to_string(disagreements) + " disagreements"};
}

// 4 ------------------------------------------------------------------------
std::vector<LabeledPrediction> expand(const ConfusionMatrix& cm) {
    std::vector<LabeledPrediction> out;
    int id = 0;
    auto add = [&](std::int64_t n, bool pred, bool actual) {
        for (std::int64_t i = 0; i < n; ++i) out.push_back({"v" + std::to_string(id++), pred, actual});
    };
    add(cm.tp, true, true);
    add(cm.fp, true, false);
    add(cm.fn, false, true);
    add(cm.tn, false, false);
    return out;
}

Outcome reference_metrics() {
    struct Row {
        const char* behavior;
        ConfusionMatrix cm;
        double acc, prec, rec, f1;
        double ci_lo, ci_hi;
    };
    const Row rows[] = {{"collision", {24, 1, 0, 38}, 0.98, 0.96, 1.00, 0.98, 0.93, 1.00},
                        {"agitation", {16, 2, 7, 38}, 0.86, 0.89, 0.70, 0.78, 0.62, 1.00}};
    bool ok = true;
    std::string detail;
    for (const auto& r : rows) {
        const auto preds = expand(r.cm);
        const auto m = classification_metrics(confusion(preds));
        const double got[] = {*m.accuracy, *m.precision, *m.recall, *m.f1};
        const double want[] = {r.acc, r.prec, r.rec, r.f1};
        for (int i = 0; i < 4; ++i) {
            const double rounded = std::round(got[i] * 100) / 100;
            ok &= std::abs(rounded - want[i]) <= kMetricTolerance && std::abs(got[i] - want[i]) <= kMetricTolerance;
        }
        const auto ci = bootstrap_ci(preds, Metric::f1, 1000, kDefaultBootstrapSeed);
        const bool overlap = ci.lo <= r.ci_hi + kCiEndpointSlack && ci.hi >= r.ci_lo - kCiEndpointSlack;
        ok &= overlap;
        detail += std::string(detail.empty() ? "" : "; ") + r.behavior + " F1 " + fmt(*m.f1, 3) + " CI [" +
                  fmt(ci.lo, 3) + ", " + fmt(ci.hi, 3) + "] vs [" + fmt(r.ci_lo, 3) + ", " + fmt(r.ci_hi, 3) + "]";
    }
    return {ok, detail};
}

// 5 ------------------------------------------------------------------------
Outcome icc_suite() {
    // Hand sums: SS_subjects 17, SS_error 4 on a 4x3 grid -> ICC(3,k) = 15/17.
    const auto r = icc_3k(RatingMatrix::from_rows({{9, 2, 5}, {6, 1, 3}, {8, 4, 6}, {7, 1, 2}}));
    const bool oracle = std::abs(r.icc - 15.0 / 17) <= kIccTolerance && std::abs(r.f - 8.5) <= kIccTolerance &&
                        std::abs(r.ms_error - 2.0 / 3) <= kIccTolerance;
    const auto same = icc_3k(RatingMatrix::from_rows({{1, 1, 1}, {4, 4, 4}, {2, 2, 2}, {5, 5, 5}}));
    RatingMatrix panel(63, 9);
    Rng rng(5005);
    for (std::size_t i = 0; i < 63; ++i)
        for (std::size_t j = 0; j < 9; ++j) panel(i, j) = 1 + static_cast<double>(rng.below(5));
    const auto big = icc_3k(panel);
    const bool ok = oracle && same.icc == 1.0 && big.df2 == 496;
    return {ok, "4x3 oracle |diff| " + fmt(std::abs(r.icc - 15.0 / 17), 2) + ", identical raters ICC " +
                    fmt(same.icc) + ", n=63 k=9 df2 " + std::to_string(big.df2)};
}

// 6 ------------------------------------------------------------------------
double max_overlap_diff(int w, int h, AuraMode::Kind kind, int* compared) {
    CollisionParams p;
    p.mode.kind = kind;
    p.mode.lambda = 2.0;
    double worst = 0.0;
    for (ScenarioKind k : kScenarioKinds) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Scenario s;
            s.kind = k;
            s.seed = seed;
            const auto g = generate(s);
            StreamHeader other = g.stream.header;
            other.width_px = w;
            other.height_px = h;
            for (const auto& f : g.stream.frames) {
                const auto a = score_frame(f, g.stream.header, p);
                const auto b = score_frame(f, other, p);
                for (HandSide side : kHandSides) {
                    worst = std::max(worst, std::abs(a.hand(side).overlap - b.hand(side).overlap));
                    ++*compared;
                }
            }
        }
    }
    return worst;
}

Outcome scale_invariance() {
    int n = 0;
    const double literal = max_overlap_diff(854, 480, AuraMode::Kind::relative, &n);
    int m = 0;
    const double uniform = std::max(max_overlap_diff(640, 360, AuraMode::Kind::relative, &m),
                                    max_overlap_diff(1920, 1080, AuraMode::Kind::relative, &m));
    int q = 0;
    const double fixed = max_overlap_diff(854, 480, AuraMode::Kind::fixed, &q);
    return {literal <= kScaleTolerance,
            "854x480 max |diff| " + fmt(literal, 3) + " over " + std::to_string(n) +
                " hand-frames; uniform 640x360/1920x1080 max |diff| " + fmt(uniform, 3) +
                (uniform <= kScaleTolerance ? " (within 1e-9)" : " (OUTSIDE 1e-9)") +
                "; fixed mode at 854x480 for contrast " + fmt(fixed, 3)};
}

// 7 ------------------------------------------------------------------------
Outcome tuning_suite() {
    const auto grid = enumerate_grid(GridSpec::around(TuningConfig{}));
    const bool has_best = std::find(grid.begin(), grid.end(), TuningConfig{0.18, 0.63, 0.9}) != grid.end();

    const auto roster = label_set(kStudyVideoCount, ScenarioMix::study(), 7007);
    std::vector<LabeledStream> videos;
    std::vector<std::string> ids;
    for (const auto& e : roster) {
        Scenario s = e.scenario;
        s.margin = 2.0;
        videos.push_back({e.video_id, generate(s).stream, e.collision, e.agitation});
        ids.push_back(e.video_id);
    }
    const auto plan = make_folds(ids, 7007);
    std::set<std::string> seen;
    bool partition = true;
    for (const auto& block : plan.tuning) {
        partition &= block.size() == 21;
        for (const auto& id : block) partition &= seen.insert(id).second;
    }
    partition &= seen.size() == 63;

    const auto report = run_folds(plan, grid, videos, DetectorParams{});
    const bool stable = report.cross_fold_deviation && *report.cross_fold_deviation <= kDeviationBound;
    return {grid.size() == 27 && has_best && partition && stable,
            std::to_string(grid.size()) + " configs, (0.18, 0.63, 0.9) " + (has_best ? "present" : "MISSING") +
                ", folds " + (partition ? "3x21 disjoint" : "NOT a partition") + ", cross-fold deviation " +
                (report.cross_fold_deviation ? fmt(*report.cross_fold_deviation) : std::string("undefined"))};
}

// 8 ------------------------------------------------------------------------
int sh(const std::string& cmd) { return std::system((cmd + " >/dev/null 2>&1").c_str()); }

std::string slurp_tree(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::string all;
    for (const auto& f : files) all += fs::relative(f, dir).string() + '\0' + read_file(f.string()) + '\0';
    return all;
}

Outcome determinism() {
    const fs::path base = fs::temp_directory_path() / "aura_acceptance_determinism";
    fs::remove_all(base);
    const std::string cli = AURA_CLI;
    std::vector<std::string> outputs[2];
    int failures = 0;
    for (int pass = 0; pass < 2; ++pass) {
        const fs::path d = base / ("run" + std::to_string(pass));
        fs::create_directories(d);
        auto at = [&](const std::string& name) { return (d / name).string(); };
        std::ofstream(at("ratings.csv")) << "subject,a,b,c\n1,5,2,4\n2,4,1,3\n3,5,3,5\n4,4,1,2\n";
        const std::vector<std::string> cmds = {
            "simulate --kind reach --seed 1 --output " + at("reach.jsonl"),
            "simulate --kind calm --seed 1 --output " + at("calm.jsonl"),
            "simulate --roster 63 --seed 5 --output " + at("roster"),
            "detect " + at("reach.jsonl") + " --output " + at("reach.events") + " --annotations " + at("reach.ann"),
            "detect " + at("calm.jsonl") + " --mode relative --lambda 2 --output " + at("calm.events"),
            "annotate-only " + at("reach.jsonl") + " --output " + at("reach.only.ann"),
            "predict " + at("roster") + " --output " + at("preds.csv"),
            "evaluate " + at("preds.csv") + " " + at("roster/labels.csv") + " --seed 9 --output " + at("eval.jsonl"),
            "tune " + at("roster") + " " + at("roster/labels.csv") + " --seed 3 --output " + at("tune.jsonl"),
            "icc " + at("ratings.csv") + " --output " + at("icc.json"),
        };
        for (const auto& c : cmds) failures += sh(cli + " " + c) != 0;
        outputs[pass].push_back(slurp_tree(d));
    }
    const bool same = outputs[0] == outputs[1];
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(base / "run0")) files += e.is_regular_file();
    fs::remove_all(base);
    return {failures == 0 && same, "10 commands x 2 runs, " + std::to_string(files) + " output files, " +
                                       std::to_string(failures) + " nonzero exits, outputs " +
                                       (same ? "byte-identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {1, "score functions", 1.0, score_functions},
        {2, "persistence", 1.0, persistence},
        {3, "simulator oracle", 30.0, oracle},
        {4, "reference metric consistency", 10.0, reference_metrics},
        {5, "ICC", 1.0, icc_suite},
        {6, "scale invariance", 5.0, scale_invariance},
        {7, "tuning", 120.0, tuning_suite},
        {8, "determinism", 0.0, determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.contains(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.limit_s == 0.0 || secs < c.limit_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): " << o.detail
                  << "; " << fmt(secs, 3) << " s";
        if (c.limit_s > 0) std::cout << " (limit " << fmt(c.limit_s) << " s" << (in_time ? "" : ", EXCEEDED") << ")";
        std::cout << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
