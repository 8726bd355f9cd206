#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "pramr/config.hpp"
#include "pramr/decision.hpp"
#include "pramr/frame.hpp"
#include "pramr/rng.hpp"
#include "pramr/state.hpp"

using namespace pramr;

namespace {

DiagnosticFrame mid_frame(double t = 0.0) {
    DiagnosticFrame f;
    f.timestamp = t;
    f.camera = {0.5, 0.5, 0.5};
    f.lidar = {0.5, 0.5, 0.5};
    f.radar = {0.5, 0.5, 0.5};
    f.external = {0.5, 0.5};
    f.map_complexity = 0.5;
    return f;
}

DiagnosticFrame random_frame(CounterRng& rng, double t) {
    DiagnosticFrame f;
    f.timestamp = t;
    f.camera = {rng.next_double(), rng.next_double(), rng.next_double()};
    f.lidar = {rng.next_double(), rng.next_double(), rng.next_double()};
    f.radar = {rng.next_double(), rng.next_double(), rng.next_double()};
    f.external = {rng.next_double(), rng.next_double()};
    f.map_complexity = rng.next_double();
    return f;
}

}  // namespace

TEST_CASE("modality index round-trips with identifier") {
    for (auto m : kAllModalities) {
        CHECK(modality_at(index_of(m)) == m);
        CHECK(modality_from_name(name_of(m)) == m);
    }
    CHECK(!modality_from_name("sonar").has_value());
}

TEST_CASE("modality set operations") {
    ModalitySet s;
    CHECK(s.empty());
    s.insert(Modality::Camera);
    s.insert(Modality::Radar);
    CHECK(s.size() == 2);
    CHECK(s.contains(Modality::Camera));
    CHECK(!s.contains(Modality::Lidar));
    CHECK((s & ModalitySet::all()) == s);
    CHECK(to_string(s) == "{camera,radar}");
}

TEST_CASE("validate_frame accepts interior point") {
    CHECK(!validate_frame(mid_frame()).has_value());
}

TEST_CASE("validate_frame names the offending field") {
    auto f = mid_frame();
    f.camera.brightness_mean = 1.2;
    auto bad = validate_frame(f);
    REQUIRE(bad.has_value());
    CHECK(*bad == "camera.brightness_mean");

    f = mid_frame();
    f.radar.detection_probability = -0.1;
    CHECK(validate_frame(f) == "radar.detection_probability");
}

TEST_CASE("validate_trace rejects equal timestamps") {
    std::vector<DiagnosticFrame> trace = {mid_frame(1.0), mid_frame(1.0)};
    auto bad = validate_trace(trace);
    REQUIRE(bad.has_value());
    CHECK(bad->find("not strictly increasing") != std::string::npos);
}

TEST_CASE("frame JSON round-trip") {
    CounterRng rng(7);
    for (int i = 0; i < 50; ++i) {
        auto f = random_frame(rng, i * 0.5);
        CHECK(frame_from_json(frame_to_json(f)) == f);
    }
}

TEST_CASE("decision JSON round-trip") {
    CounterRng rng(11);
    for (int i = 0; i < 50; ++i) {
        RouterDecision d;
        for (auto m : kAllModalities) {
            at(d.usage, m) = rng.next_bool();
            at(d.reliability, m) = rng.next_double();
        }
        d.scene_complexity = rng.next_double();
        d.source = DecisionSource::Scripted;
        CHECK(decision_from_json(decision_to_json(d)) == d);
    }
}

TEST_CASE("state JSON round-trip") {
    RoutingState s;
    s.step = 3;
    s.usage_set = ModalitySet{0x5};
    s.reliable_set = ModalitySet{0x3};
    s.fused_set = ModalitySet{0x1};
    s.states = {true, false, true};
    s.weights = {0.7, 0.0, 0.3};
    s.smoothed = {0.65, 0.05, 0.3};
    s.active_set = ModalitySet{0x1};
    s.fallback_used = true;
    CHECK(state_from_json(state_to_json(s)) == s);
}

TEST_CASE("config defaults are valid and round-trip") {
    RoutingConfig c;
    CHECK(!validate_config(c).has_value());
    auto doc = config_to_json(c);
    RoutingConfig back = config_from_json(doc);
    CHECK(back.thresholds == c.thresholds);
    CHECK(back.hysteresis_margin == c.hysteresis_margin);
    CHECK(back.tau == c.tau);
    CHECK(back.slow_period == c.slow_period);
}

TEST_CASE("config rejects a margin that breaks the band") {
    RoutingConfig c;
    c.thresholds = {0.5, 0.5, 0.04};
    c.hysteresis_margin = 0.05;  // theta_off < 0 for radar
    auto bad = validate_config(c);
    REQUIRE(bad.has_value());
    CHECK(bad->find("theta_off") != std::string::npos);

    c.thresholds = {0.97, 0.5, 0.5};
    bad = validate_config(c);
    REQUIRE(bad.has_value());
    CHECK(bad->find("theta_on") != std::string::npos);
}

TEST_CASE("config rejects non-integer cadence ratio") {
    RoutingConfig c;
    c.fast_period = 0.5;
    c.slow_period = 1.2;
    CHECK(validate_config(c).has_value());
}

TEST_CASE("trace file round-trip") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "pramr_core_test";
    fs::create_directories(dir);
    auto path = (dir / "trace.jsonl").string();

    CounterRng rng(3);
    std::vector<DiagnosticFrame> trace;
    for (int i = 0; i < 20; ++i) trace.push_back(random_frame(rng, i * 0.5));
    write_trace(path, trace);
    CHECK(read_trace(path) == trace);
    fs::remove_all(dir);
}
