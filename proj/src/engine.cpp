#include "aura/engine.hpp"

#include "aura/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace aura {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& key, const std::string& value, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(v))
        throw ParseError(line, "\"" + key + "\" expects a number, got \"" + value + "\"");
    return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value, std::size_t line) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ParseError(line, "\"" + key + "\" expects an integer, got \"" + value + "\"");
    return v;
}

std::string format_real(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

void validate(const DetectorParams& params) {
    validate(params.collision);
    validate(params.agitation);
}

EngineConfig parse_config(std::string_view text) {
    EngineConfig cfg;
    auto& col = cfg.detector.collision;
    auto& agi = cfg.detector.agitation;
    std::set<std::string> seen;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string content = trim(raw);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected key = value");
        const std::string key = trim(std::string_view(content).substr(0, eq));
        const std::string value = trim(std::string_view(content).substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError(line, "expected key = value");
        if (!seen.insert(key).second) throw ParseError(line, "repeated key \"" + key + "\"");

        if (key == "tau_base") col.tau_base = parse_real(key, value, line);
        else if (key == "r_m") col.r_m_base = parse_real(key, value, line);
        else if (key == "r_h") col.r_h_base = parse_real(key, value, line);
        else if (key == "alpha") col.alpha = parse_real(key, value, line);
        else if (key == "beta") col.beta = parse_real(key, value, line);
        else if (key == "tau_score") col.tau_score = parse_real(key, value, line);
        else if (key == "tau_duration") col.tau_duration = parse_real(key, value, line);
        else if (key == "tau_speed") agi.tau_speed = parse_real(key, value, line);
        else if (key == "tau_valid") col.tau_valid = agi.tau_valid = parse_real(key, value, line);
        else if (key == "w") {
            const auto w = parse_int(key, value, line);
            if (w < 2 || w > 100000) throw ValidationError("line " + std::to_string(line) + ": w out of range");
            agi.window = static_cast<int>(w);
        } else if (key == "aura_mode") {
            if (value == "fixed") col.mode.kind = AuraMode::Kind::fixed;
            else if (value == "relative") col.mode.kind = AuraMode::Kind::relative;
            else throw ParseError(line, "aura_mode must be fixed or relative");
        } else if (key == "lambda") col.mode.lambda = parse_real(key, value, line);
        else if (key == "s_r") col.mode.s_r = parse_real(key, value, line);
        else if (key == "velocity_pooling") {
            if (value == "aggregate") agi.pooling = VelocityPooling::aggregate;
            else if (value == "pooled") agi.pooling = VelocityPooling::pooled;
            else throw ParseError(line, "velocity_pooling must be aggregate or pooled");
        } else if (key == "bootstrap") {
            const auto b = parse_int(key, value, line);
            if (b < 1 || b > 10'000'000) throw ValidationError("line " + std::to_string(line) + ": bootstrap out of range");
            cfg.bootstrap = static_cast<int>(b);
        } else if (key == "seed") {
            const auto s = parse_int(key, value, line);
            if (s < 0) throw ValidationError("line " + std::to_string(line) + ": seed must be non-negative");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else {
            throw ParseError(line, "unknown key \"" + key + "\"");
        }
    }
    validate(cfg.detector);
    return cfg;
}

EngineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const EngineConfig& cfg) {
    const auto& col = cfg.detector.collision;
    const auto& agi = cfg.detector.agitation;
    std::ostringstream os;
    os << "tau_base = " << format_real(col.tau_base) << '\n'
       << "r_m = " << format_real(col.r_m_base) << '\n'
       << "r_h = " << format_real(col.r_h_base) << '\n'
       << "alpha = " << format_real(col.alpha) << '\n'
       << "beta = " << format_real(col.beta) << '\n'
       << "tau_score = " << format_real(col.tau_score) << '\n'
       << "tau_duration = " << format_real(col.tau_duration) << '\n'
       << "tau_speed = " << format_real(agi.tau_speed) << '\n'
       << "tau_valid = " << format_real(col.tau_valid) << '\n'
       << "w = " << agi.window << '\n'
       << "aura_mode = " << to_string(col.mode.kind) << '\n'
       << "lambda = " << format_real(col.mode.lambda) << '\n'
       << "s_r = " << format_real(col.mode.s_r) << '\n'
       << "velocity_pooling = " << to_string(agi.pooling) << '\n'
       << "bootstrap = " << cfg.bootstrap << '\n'
       << "seed = " << cfg.seed << '\n';
    return os.str();
}

DetectionResult run_detection(const KeypointStream& stream, const DetectorParams& params) {
    DetectionResult out;
    CollisionTrack track(params.collision);
    AgitationWindow window(params.agitation);
    out.collision_frames.reserve(stream.frames.size());
    out.agitation_frames.reserve(stream.frames.size());
    for (const auto& f : stream.frames) {
        out.collision_frames.push_back(track.step(f, stream.header));
        const auto& radii = out.collision_frames.back().radii;
        out.radius_fallback_frames += (radii.mouth_fallback || radii.hand_fallback);
        out.agitation_frames.push_back(window.push(f));
    }
    track.finish();
    out.events = track.events();
    out.prediction.collision = video_prediction(std::span<const CollisionEvent>(out.events));
    out.prediction.agitation = video_prediction(std::span<const AgitationFrameResult>(out.agitation_frames));
    return out;
}

VideoPrediction predict_video(const KeypointStream& stream, const DetectorParams& params) {
    CollisionTrack track(params.collision);
    AgitationWindow window(params.agitation);
    VideoPrediction p;
    for (const auto& f : stream.frames) {
        track.step(f, stream.header);
        p.agitation = window.push(f).is_agitation || p.agitation;
    }
    p.collision = !track.events().empty();
    return p;
}

}  // namespace aura
