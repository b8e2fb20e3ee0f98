#include "aura/report.hpp"

#include "aura/error.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace aura {

namespace {

using ojson = nlohmann::ordered_json;

ojson num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round_sig6(v);
}

ojson num(const std::optional<double>& v) { return v ? num(*v) : ojson(nullptr); }

ojson point(const std::optional<PixelPoint>& p) {
    if (!p) return nullptr;
    return ojson::array({num(p->x), num(p->y)});
}

ojson metrics_json(const ClassificationMetrics& m) {
    ojson j;
    j["accuracy"] = num(m.accuracy);
    j["precision"] = num(m.precision);
    j["recall"] = num(m.recall);
    j["f1"] = num(m.f1);
    return j;
}

ojson config_json(const TuningConfig& c) {
    ojson j;
    j["tau_speed"] = num(c.tau_speed);
    j["tau_valid"] = num(c.tau_valid);
    j["s_r"] = num(c.s_r);
    return j;
}

ojson evaluation_json(const ConfigEvaluation& e) {
    ojson j;
    j["collision"] = metrics_json(e.collision);
    j["agitation"] = metrics_json(e.agitation);
    j["combined_f1"] = num(e.combined_f1);
    j["flagged"] = e.flagged;
    return j;
}

ojson aura_json(const AuraAnnotation& a) {
    ojson j;
    j["center"] = point(a.center);
    j["radius"] = num(a.radius);
    j["state"] = std::string(to_string(a.state));
    j["color"] = std::string(color_of(a.state));
    return j;
}

bool parse_flag(const std::string& cell, std::size_t line) {
    if (cell == "1" || cell == "true") return true;
    if (cell == "0" || cell == "false") return false;
    throw ParseError(line, "label cell must be 0/1, got \"" + cell + "\"");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

double round_sig6(double v) noexcept {
    if (v == 0.0) return 0.0;
    if (!std::isfinite(v)) return v;
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    double out = v;
    std::from_chars(buf, res.ptr, out);
    return out;
}

std::string events_jsonl(const StreamHeader& header, const DetectionResult& result) {
    std::string out;
    for (const auto& ev : result.events) {
        ojson j;
        j["type"] = "collision";
        j["side"] = std::string(to_string(ev.side));
        j["onset_s"] = num(ev.onset_s);
        j["confirmed_s"] = num(ev.confirmed_s);
        j["end_s"] = num(ev.end_s);
        j["onset_frame"] = ev.onset_frame;
        j["confirmed_frame"] = ev.confirmed_frame;
        j["end_frame"] = ev.end_frame;
        j["open_at_end"] = ev.open_at_end;
        out += j.dump() + '\n';
    }
    for (const auto& a : result.agitation_frames) {
        ojson j;
        j["type"] = "agitation_window";
        j["frame"] = a.frame_index;
        j["timestamp_s"] = num(a.timestamp_s);
        j["mean_velocity"] = num(a.mean_velocity);
        j["peak_velocity"] = num(a.peak_velocity);
        j["cumulative_velocity"] = num(a.cumulative_velocity);
        j["n_valid_transitions"] = a.n_valid_transitions;
        j["is_agitation"] = a.is_agitation;
        out += j.dump() + '\n';
    }
    ojson s;
    s["type"] = "video_summary";
    s["video_id"] = header.video_id;
    s["frames"] = result.collision_frames.size();
    s["collision"] = result.prediction.collision;
    s["agitation"] = result.prediction.agitation;
    s["collision_events"] = result.events.size();
    std::size_t agitated = 0;
    for (const auto& a : result.agitation_frames) agitated += a.is_agitation;
    s["agitation_frames"] = agitated;
    s["radius_fallback_frames"] = result.radius_fallback_frames;
    out += s.dump() + '\n';
    return out;
}

std::string_view to_string(AuraState s) noexcept {
    return s == AuraState::normal ? "normal" : "collision";
}

std::string_view color_of(AuraState s) noexcept {
    return s == AuraState::normal ? "green" : "red";
}

std::vector<FrameAnnotation> annotate(const DetectionResult& result) {
    std::vector<FrameAnnotation> out;
    out.reserve(result.collision_frames.size());
    for (std::size_t i = 0; i < result.collision_frames.size(); ++i) {
        const auto& c = result.collision_frames[i];
        FrameAnnotation a;
        a.frame = c.frame_index;
        a.timestamp_s = c.timestamp_s;
        const bool left = c.hand(HandSide::left).confirmed;
        const bool right = c.hand(HandSide::right).confirmed;
        a.mouth = {c.anchors.mouth_center, c.radii.mouth,
                   (left || right) ? AuraState::collision : AuraState::normal};
        a.hand_left = {c.anchors.hand_center_left, c.radii.hand,
                       left ? AuraState::collision : AuraState::normal};
        a.hand_right = {c.anchors.hand_center_right, c.radii.hand,
                        right ? AuraState::collision : AuraState::normal};
        a.lh_score = c.hand(HandSide::left).score;
        a.rh_score = c.hand(HandSide::right).score;
        if (i < result.agitation_frames.size()) {
            a.vel = result.agitation_frames[i].mean_velocity;
            a.agitation = result.agitation_frames[i].is_agitation;
        }
        out.push_back(a);
    }
    return out;
}

std::string annotations_jsonl(const std::vector<FrameAnnotation>& frames) {
    std::string out;
    for (const auto& a : frames) {
        ojson j;
        j["frame"] = a.frame;
        j["timestamp_s"] = num(a.timestamp_s);
        j["mouth"] = aura_json(a.mouth);
        j["hand_left"] = aura_json(a.hand_left);
        j["hand_right"] = aura_json(a.hand_right);
        j["LH"] = num(a.lh_score);
        j["RH"] = num(a.rh_score);
        j["VEL"] = num(a.vel);
        j["agitation"] = a.agitation;
        out += j.dump() + '\n';
    }
    return out;
}

std::map<std::string, VideoPrediction> parse_label_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::map<std::string, VideoPrediction> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        for (std::string cell; std::getline(row, cell, ',');) cells.push_back(trim(cell));
        if (!header) {
            if (cells != std::vector<std::string>{"video_id", "collision", "agitation"})
                throw ParseError(line_no, "header must be video_id,collision,agitation");
            header = true;
            continue;
        }
        if (cells.size() != 3 || cells[0].empty()) throw ParseError(line_no, "expected 3 cells");
        VideoPrediction p{parse_flag(cells[1], line_no), parse_flag(cells[2], line_no)};
        if (!out.emplace(cells[0], p).second)
            throw ValidationError("line " + std::to_string(line_no) + ": duplicate video id \"" + cells[0] + "\"");
    }
    if (!header) throw ParseError(line_no + 1, "missing header row");
    return out;
}

std::map<std::string, VideoPrediction> load_label_csv(const std::string& path) {
    return parse_label_csv(read_file(path));
}

std::string label_csv(const std::map<std::string, VideoPrediction>& labels) {
    std::string out = "video_id,collision,agitation\n";
    for (const auto& [id, p] : labels) {
        out += id + ',' + (p.collision ? '1' : '0') + ',' + (p.agitation ? '1' : '0') + '\n';
    }
    return out;
}

std::string evaluation_jsonl(const std::map<std::string, std::vector<CiEstimate>>& by_behavior) {
    std::string out;
    for (const auto& [behavior, estimates] : by_behavior) {
        for (const auto& e : estimates) {
            ojson j;
            j["behavior"] = behavior;
            j["metric"] = std::string(to_string(e.metric));
            j["point"] = num(e.point);
            j["ci_lo"] = num(e.lo);
            j["ci_hi"] = num(e.hi);
            j["B"] = e.replicates;
            j["seed"] = e.seed;
            j["skipped"] = e.skipped;
            out += j.dump() + '\n';
        }
    }
    return out;
}

std::string tuning_jsonl(const TuningReport& report) {
    std::string out;
    for (std::size_t f = 0; f < kFoldCount; ++f) {
        const auto& fold = report.folds[f];
        for (std::size_t c = 0; c < fold.tuning.size(); ++c) {
            ojson j;
            j["type"] = "config";
            j["fold"] = f;
            j["config_index"] = c;
            j["config"] = config_json(report.grid[c]);
            j["tuning"] = evaluation_json(fold.tuning[c]);
            out += j.dump() + '\n';
        }
    }
    for (std::size_t f = 0; f < kFoldCount; ++f) {
        const auto& fold = report.folds[f];
        ojson j;
        j["type"] = "fold";
        j["fold"] = f;
        j["best_index"] = fold.best_index;
        j["best"] = config_json(fold.best);
        j["tuning_combined_f1"] = num(fold.tuning_score);
        j["validation"] = evaluation_json(fold.validation);
        out += j.dump() + '\n';
    }
    ojson s;
    s["type"] = "summary";
    s["folds"] = kFoldCount;
    s["configs"] = report.grid.size();
    s["tuning_evaluations"] = report.tuning_evaluations;
    s["cross_fold_deviation"] = num(report.cross_fold_deviation);
    out += s.dump() + '\n';
    return out;
}

std::string icc_json(const IccResult& r, std::size_t subjects, std::size_t raters) {
    ojson j;
    j["n"] = subjects;
    j["k"] = raters;
    j["icc"] = num(r.icc);
    j["f"] = num(r.f);
    j["df1"] = r.df1;
    j["df2"] = r.df2;
    j["p"] = num(r.p);
    j["ms_subjects"] = num(r.ms_subjects);
    j["ms_raters"] = num(r.ms_raters);
    j["ms_error"] = num(r.ms_error);
    j["rater_f"] = num(r.rater_f);
    j["rater_df1"] = r.rater_df1;
    j["rater_p"] = num(r.rater_p);
    return j.dump() + '\n';
}

void write_file_atomic(const std::string& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw ValidationError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw ValidationError("cannot move output into place at " + path + ": " + ec.message());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace aura
