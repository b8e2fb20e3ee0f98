#include "aura/keypoint_stream.hpp"

#include "aura/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace aura {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, kLandmarkCount> kNames = {
    "nose",
    "eye_inner_left",
    "eye_left",
    "eye_outer_left",
    "eye_inner_right",
    "eye_right",
    "eye_outer_right",
    "eyebrow_left",
    "eyebrow_right",
    "ear_left",
    "ear_right",
    "mouth_left",
    "mouth_right",
    "shoulder_left",
    "shoulder_right",
    "elbow_left",
    "elbow_right",
    "wrist_left",
    "wrist_right",
    "pinky_left",
    "pinky_right",
    "index_left",
    "index_right",
    "thumb_left",
    "thumb_right",
    "hip_left",
    "hip_right",
    "knee_left",
    "knee_right",
    "ankle_left",
    "ankle_right",
    "heel_left",
    "heel_right",
    "foot_index_left",
    "foot_index_right",
};

constexpr auto make_all() {
    std::array<LandmarkId, kLandmarkCount> ids{};
    for (std::size_t i = 0; i < kLandmarkCount; ++i) ids[i] = static_cast<LandmarkId>(i);
    return ids;
}

constexpr std::array<LandmarkId, kLandmarkCount> kAll = make_all();

const json& require(const json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(line, std::string("missing key \"") + key + "\"");
    return *it;
}

double require_number(const json& obj, const char* key, std::size_t line) {
    const json& v = require(obj, key, line);
    if (!v.is_number()) throw ParseError(line, std::string("\"") + key + "\" must be a number");
    return v.get<double>();
}

std::int64_t require_integer(const json& obj, const char* key, std::size_t line) {
    const json& v = require(obj, key, line);
    if (!v.is_number_integer()) throw ParseError(line, std::string("\"") + key + "\" must be an integer");
    return v.get<std::int64_t>();
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         std::size_t line) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (auto k : allowed) known = known || it.key() == k;
        if (!known) throw ParseError(line, "unexpected key \"" + it.key() + "\"");
    }
}

json parse_json_line(std::string_view text, std::size_t line) {
    json j = json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw ParseError(line, "invalid JSON");
    if (!j.is_object()) throw ParseError(line, "record must be a JSON object");
    return j;
}

StreamHeader parse_header(std::string_view text, std::size_t line) {
    json j = parse_json_line(text, line);
    reject_unknown_keys(j, {"video_id", "fps", "width_px", "height_px", "provenance"}, line);
    StreamHeader h;
    const json& id = require(j, "video_id", line);
    if (!id.is_string()) throw ParseError(line, "\"video_id\" must be a string");
    h.video_id = id.get<std::string>();
    h.fps = require_number(j, "fps", line);
    const auto w = require_integer(j, "width_px", line);
    const auto ht = require_integer(j, "height_px", line);
    if (w <= 0 || ht <= 0 || w > INT32_MAX || ht > INT32_MAX)
        throw ValidationError("line " + std::to_string(line) + ": frame dimensions must be positive");
    h.width_px = static_cast<int>(w);
    h.height_px = static_cast<int>(ht);
    if (auto it = j.find("provenance"); it != j.end()) h.provenance = it->dump();
    validate(h);
    return h;
}

KeypointFrame parse_frame(std::string_view text, std::size_t line) {
    json j = parse_json_line(text, line);
    reject_unknown_keys(j, {"index", "timestamp_s", "landmarks"}, line);
    KeypointFrame f;
    f.index = require_integer(j, "index", line);
    f.timestamp_s = require_number(j, "timestamp_s", line);
    if (!std::isfinite(f.timestamp_s))
        throw ValidationError("line " + std::to_string(line) + ": timestamp must be finite");
    const json& lms = require(j, "landmarks", line);
    if (!lms.is_object()) throw ParseError(line, "\"landmarks\" must be an object");
    for (auto it = lms.begin(); it != lms.end(); ++it) {
        auto id = landmark_from_string(it.key());
        if (!id) {
            throw ValidationError("line " + std::to_string(line) + ": unknown landmark id \"" +
                                  it.key() + "\"");
        }
        const json& v = it.value();
        if (!v.is_object()) throw ParseError(line, "landmark \"" + it.key() + "\" must be an object");
        reject_unknown_keys(v, {"x", "y", "z", "visibility"}, line);
        Landmark lm{require_number(v, "x", line), require_number(v, "y", line),
                    require_number(v, "z", line), require_number(v, "visibility", line)};
        try {
            validate(lm, *id);
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(line) + ": " + e.what());
        }
        f.landmarks.set(*id, lm);
    }
    return f;
}

}  // namespace

std::string_view to_string(LandmarkId id) noexcept {
    return kNames[static_cast<std::size_t>(id)];
}

std::optional<LandmarkId> landmark_from_string(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kLandmarkCount; ++i) {
        if (kNames[i] == name) return static_cast<LandmarkId>(i);
    }
    return std::nullopt;
}

const std::array<LandmarkId, kLandmarkCount>& all_landmarks() noexcept { return kAll; }

std::size_t LandmarkMap::size() const noexcept {
    std::size_t n = 0;
    for (const auto& s : slots_) n += s.has_value();
    return n;
}

void validate(const StreamHeader& header) {
    if (!(header.fps > 0.0) || !std::isfinite(header.fps))
        throw ValidationError("fps must be a positive finite number");
    if (header.width_px <= 0 || header.height_px <= 0)
        throw ValidationError("frame dimensions must be positive");
}

void validate(const Landmark& lm, LandmarkId id) {
    if (!std::isfinite(lm.x) || !std::isfinite(lm.y) || !std::isfinite(lm.z))
        throw ValidationError("landmark " + std::string(to_string(id)) + " has non-finite coordinates");
    if (!(lm.visibility >= 0.0 && lm.visibility <= 1.0))
        throw ValidationError("landmark " + std::string(to_string(id)) + " visibility outside [0,1]");
}

void validate_order(const KeypointFrame& prev, const KeypointFrame& next) {
    if (next.index <= prev.index) {
        throw ValidationError("frame index " + std::to_string(next.index) +
                              " does not follow " + std::to_string(prev.index));
    }
    if (next.timestamp_s < prev.timestamp_s) {
        std::ostringstream os;
        os << "timestamp " << next.timestamp_s << " at frame " << next.index
           << " precedes " << prev.timestamp_s;
        throw ValidationError(os.str());
    }
}

KeypointStream parse_stream(std::istream& in) {
    KeypointStream stream;
    bool have_header = false;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.find_first_not_of(" \t") == std::string::npos) continue;
        if (!have_header) {
            stream.header = parse_header(text, line);
            have_header = true;
            continue;
        }
        KeypointFrame f = parse_frame(text, line);
        if (!stream.frames.empty()) {
            try {
                validate_order(stream.frames.back(), f);
            } catch (const ValidationError& e) {
                throw ValidationError("line " + std::to_string(line) + ": " + e.what());
            }
        }
        stream.frames.push_back(std::move(f));
    }
    if (!have_header) throw ParseError(line + 1, "missing header record");
    return stream;
}

KeypointStream parse_stream(std::string_view source) {
    std::istringstream in{std::string(source)};
    return parse_stream(in);
}

KeypointStream load_stream(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open stream file " + path);
    return parse_stream(in);
}

std::string serialize_header(const StreamHeader& header) {
    json j = json::object();
    j["video_id"] = header.video_id;
    j["fps"] = header.fps;
    j["width_px"] = header.width_px;
    j["height_px"] = header.height_px;
    if (!header.provenance.empty()) j["provenance"] = json::parse(header.provenance);
    return j.dump();
}

std::string serialize_frame(const KeypointFrame& frame) {
    // Key order is fixed by hand so output stays byte-stable.
    std::string out = "{\"index\":" + std::to_string(frame.index) +
                      ",\"timestamp_s\":" + json(frame.timestamp_s).dump() + ",\"landmarks\":{";
    bool first = true;
    frame.landmarks.for_each([&](LandmarkId id, const Landmark& lm) {
        if (!first) out += ',';
        first = false;
        out += '"';
        out += to_string(id);
        out += "\":{\"x\":" + json(lm.x).dump() + ",\"y\":" + json(lm.y).dump() +
               ",\"z\":" + json(lm.z).dump() + ",\"visibility\":" + json(lm.visibility).dump() + "}";
    });
    out += "}}";
    return out;
}

std::string serialize_stream(const KeypointStream& stream) {
    std::string out = serialize_header(stream.header);
    out += '\n';
    for (const auto& f : stream.frames) {
        out += serialize_frame(f);
        out += '\n';
    }
    return out;
}

PixelPoint to_pixels(const Landmark& lm, const StreamHeader& header) noexcept {
    return {lm.x * header.width_px, lm.y * header.height_px};
}

}  // namespace aura
