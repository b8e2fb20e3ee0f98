#include "aura/engine.hpp"
#include "aura/error.hpp"
#include "aura/simulator.hpp"
#include "../support.hpp"

#include <doctest.h>

using namespace aura;

TEST_CASE("empty config gives the built-in defaults") {
    const auto c = parse_config("");
    CHECK(c == EngineConfig{});
    const auto& col = c.detector.collision;
    CHECK(col.tau_base == 0.3);
    CHECK(col.r_m_base == 150.0);
    CHECK(col.r_h_base == 100.0);
    CHECK(col.alpha == 0.7);
    CHECK(col.beta == 0.3);
    CHECK(col.tau_score == 0.3);
    CHECK(col.tau_duration == 0.3);
    CHECK(col.tau_valid == 0.7);
    CHECK(col.mode.kind == AuraMode::Kind::fixed);
    CHECK(col.mode.s_r == 1.0);
    CHECK(c.detector.agitation.tau_speed == 0.18);
    CHECK(c.detector.agitation.window == 5);
    CHECK(c.detector.agitation.tau_valid == 0.7);
    CHECK(c.bootstrap == 1000);
}

TEST_CASE("config keys, comments and whitespace") {
    const auto c = parse_config(
        "# tuned\n"
        "tau_speed = 0.162\n"
        "  tau_valid=0.63   # both detectors\n"
        "aura_mode = relative\n"
        "lambda = 2.5\n"
        "s_r = 0.9\n"
        "w = 7\n"
        "velocity_pooling = pooled\n"
        "bootstrap = 250\n"
        "seed = 12\n");
    CHECK(c.detector.agitation.tau_speed == 0.162);
    CHECK(c.detector.agitation.tau_valid == 0.63);
    CHECK(c.detector.collision.tau_valid == 0.63);
    CHECK(c.detector.collision.mode.kind == AuraMode::Kind::relative);
    CHECK(c.detector.collision.mode.lambda == 2.5);
    CHECK(c.detector.collision.mode.s_r == 0.9);
    CHECK(c.detector.agitation.window == 7);
    CHECK(c.detector.agitation.pooling == VelocityPooling::pooled);
    CHECK(c.bootstrap == 250);
    CHECK(c.seed == 12);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config("tau_sped = 0.2\n"), ParseError);
    CHECK_THROWS_AS(parse_config("alpha = 0.5\nalpha = 0.6\n"), ParseError);
    CHECK_THROWS_AS(parse_config("alpha 0.5\n"), ParseError);
    CHECK_THROWS_AS(parse_config("alpha = high\n"), ParseError);
    CHECK_THROWS_AS(parse_config("alpha = 0.5x\n"), ParseError);
    CHECK_THROWS_AS(parse_config("w = 2.5\n"), ParseError);
    CHECK_THROWS_AS(parse_config("aura_mode = elastic\n"), ParseError);
    CHECK_THROWS_AS(parse_config("tau_valid = 1.3\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("s_r = 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("w = 1\n"), ValidationError);
    try {
        parse_config("\n\nbogus = 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("serialized config parses back to itself") {
    EngineConfig c;
    c.detector.collision.tau_base = 0.25;
    c.detector.collision.mode = {AuraMode::Kind::relative, 1.75, 0.9};
    c.detector.agitation.tau_speed = 0.198;
    c.detector.agitation.pooling = VelocityPooling::pooled;
    c.bootstrap = 42;
    c.seed = 99;
    CHECK(parse_config(serialize_config(c)) == c);
    CHECK(parse_config(serialize_config(EngineConfig{})) == EngineConfig{});
}

TEST_CASE("run_detection agrees with the individual detectors") {
    for (ScenarioKind k : kScenarioKinds) {
        Scenario s;
        s.kind = k;
        s.seed = 6;
        const auto g = generate(s);
        const DetectorParams p;
        const auto r = run_detection(g.stream, p);
        CHECK(r.collision_frames.size() == g.stream.frames.size());
        CHECK(r.agitation_frames.size() == g.stream.frames.size());
        CHECK(r.events == detect_collisions(g.stream, p.collision));
        const auto agi = detect_agitation(g.stream, p.agitation);
        REQUIRE(agi.size() == r.agitation_frames.size());
        for (std::size_t i = 0; i < agi.size(); ++i) CHECK(agi[i].is_agitation == r.agitation_frames[i].is_agitation);
        CHECK(r.prediction == predict_video(g.stream, p));
        const double last = g.stream.frames.back().timestamp_s;
        for (const auto& e : r.events) {
            CHECK(e.onset_s >= 0.0);
            CHECK(e.end_s <= last);
        }
    }
}

TEST_CASE("relative mode reports fallback frames when body size is missing") {
    KeypointStream s = aura::test::contact_stream(std::vector<bool>(5, true));
    DetectorParams p;
    p.collision.mode.kind = AuraMode::Kind::relative;
    CHECK(run_detection(s, p).radius_fallback_frames == 5);
    p.collision.mode.kind = AuraMode::Kind::fixed;
    CHECK(run_detection(s, p).radius_fallback_frames == 0);
}
