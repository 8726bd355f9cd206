#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "pramr/dual_loop.hpp"
#include "pramr/metrics.hpp"
#include "pramr/stress.hpp"

using namespace pramr;

namespace {

std::vector<DiagnosticFrame> varied_trace(int n, double dt = 0.5) {
    std::vector<DiagnosticFrame> trace;
    for (int i = 0; i < n; ++i) {
        DiagnosticFrame f;
        f.timestamp = i * dt;
        double wobble = 0.1 * std::sin(0.7 * i);
        f.camera = {0.8 + wobble, 0.8, 0.8};
        f.lidar = {0.7, 0.2, 0.7 - wobble};
        f.radar = {0.6, 0.6, 0.3};
        f.external = {0.4, 0.7};
        f.map_complexity = 0.8;
        trace.push_back(f);
    }
    return trace;
}

std::vector<DiagnosticFrame> constant_trace(int n, double dt = 0.5) {
    std::vector<DiagnosticFrame> trace;
    for (int i = 0; i < n; ++i) {
        DiagnosticFrame f;
        f.timestamp = i * dt;
        f.camera = {0.82, 0.82, 0.82};
        f.lidar = {0.75, 0.15, 0.75};
        f.radar = {0.65, 0.65, 0.25};
        f.external = {0.3, 0.8};
        f.map_complexity = 0.7;
        trace.push_back(f);
    }
    return trace;
}

}  // namespace

TEST_CASE("cadence ratio 2 yields one deliberative pass per two reactive ticks") {
    auto trace = varied_trace(20);
    RuleBasedBackend backend;
    RoutingConfig config;
    LoopSchedule schedule;  // fast 0.5, slow 1.0

    auto log = run_episode(trace, backend, config, schedule);
    REQUIRE(log.records.size() == 20);

    int deliberative = 0;
    for (const auto& r : log.records) {
        if (r.deliberative) ++deliberative;
        CHECK(r.deliberative == (r.tick % 2 == 0));
        CHECK(r.memory_tau <= r.t + 1e-12);
        // with zero latency the snapshot in effect comes from the most
        // recent even tick
        double expected_tau = std::floor(r.t / 1.0) * 1.0;
        CHECK(r.memory_tau == doctest::Approx(expected_tau));
    }
    CHECK(deliberative == 10);

    // versions never regress across the reactive stream
    for (std::size_t i = 1; i < log.records.size(); ++i) {
        CHECK(log.records[i].memory_version >= log.records[i - 1].memory_version);
    }
}

TEST_CASE("cadence ratio 1 reproduces the single-loop ablation exactly") {
    auto trace = varied_trace(16);
    RoutingConfig config;

    RuleBasedBackend b1;
    LoopSchedule schedule;
    schedule.fast_period = 0.5;
    schedule.slow_period = 0.5;
    auto dual = run_episode(trace, b1, config, schedule);

    RuleBasedBackend b2;
    auto single = single_loop_episode(trace, b2, config);

    REQUIRE(dual.records.size() == single.records.size());
    for (std::size_t i = 0; i < dual.records.size(); ++i) {
        CHECK(dual.records[i].state == single.records[i].state);
        CHECK(dual.records[i].decision == single.records[i].decision);
        CHECK(dual.records[i].deliberative);
        CHECK(single.records[i].deliberative);
    }
}

TEST_CASE("non-integer cadence ratio is rejected") {
    auto trace = varied_trace(4);
    RuleBasedBackend backend;
    RoutingConfig config;
    LoopSchedule schedule;
    schedule.fast_period = 0.5;
    schedule.slow_period = 1.2;
    CHECK_THROWS_AS(run_episode(trace, backend, config, schedule), std::invalid_argument);
}

TEST_CASE("deliberative latency delays visibility without dropping ticks") {
    auto trace = varied_trace(20);
    RoutingConfig config;

    RuleBasedBackend b1;
    LoopSchedule delayed;
    delayed.deliberative_latency = 0.7;
    auto log = run_episode(trace, b1, config, delayed);
    REQUIRE(log.records.size() == 20);  // the reactive loop never blocks

    // nothing committed before the first result lands at t = 0.7
    CHECK(log.records[0].memory_version == 0);
    CHECK(log.records[1].memory_version == 0);
    CHECK(log.records[2].memory_version > 0);

    for (const auto& r : log.records) {
        if (r.memory_version > 0) {
            CHECK(r.t - r.memory_tau >= 0.7 - 1e-9);  // always at least one latency stale
        }
    }

    // the delayed stream replays the zero-latency commits, shifted by one slow cycle
    RuleBasedBackend b2;
    auto fresh = run_episode(trace, b2, config, LoopSchedule{});
    for (std::size_t i = 2; i < log.records.size(); i += 2) {
        CHECK(log.records[i].state.smoothed == fresh.records[i - 2].state.smoothed);
        CHECK(log.records[i].state.active_set == fresh.records[i - 2].state.active_set);
    }
}

TEST_CASE("scene boundaries advance the scene id and fire scene-end expirations") {
    auto trace = varied_trace(20);
    RuleBasedBackend backend;
    RoutingConfig config;
    LoopSchedule schedule;
    schedule.scene_ends = {5.0};

    auto log = run_episode(trace, backend, config, schedule);
    for (const auto& r : log.records) {
        CHECK(r.scene_id == (r.t < 5.0 ? "scene_0" : "scene_1"));
    }
    int scene_end_expirations = 0;
    for (const auto& e : log.memory_events) {
        if (e.phase == LifecyclePhase::Expiration && e.kind == ComponentKind::RSceneRecord) {
            ++scene_end_expirations;
        }
    }
    CHECK(scene_end_expirations == 2);  // mid-episode boundary plus the final close
}

TEST_CASE("empty trace produces an empty log") {
    std::vector<DiagnosticFrame> trace;
    RuleBasedBackend backend;
    RoutingConfig config;
    auto log = run_episode(trace, backend, config, LoopSchedule{});
    CHECK(log.records.empty());
    CHECK(log.memory_events.empty());
    CHECK(log.knowledge.empty());
}

TEST_CASE("recall rate reflects the routing cadence") {
    auto trace = constant_trace(16);  // every frame lands in the same recall bucket
    RoutingConfig config;

    RuleBasedBackend b1;
    auto single = single_loop_episode(trace, b1, config);
    RuleBasedBackend b2;
    auto dual = run_episode(trace, b2, config, LoopSchedule{});

    auto count = [](const EpisodeLog& log) {
        int attempts = 0, hits = 0;
        for (const auto& r : log.records) {
            attempts += r.recall_attempted ? 1 : 0;
            hits += r.recall_hit ? 1 : 0;
        }
        return std::pair{attempts, hits};
    };

    auto [sa, sh] = count(single);
    auto [da, dh] = count(dual);
    CHECK(sa == 16);  // every tick routes
    CHECK(da == 8);   // only deliberative ticks route
    CHECK(sh > dh);
    CHECK(sh >= 1);

    auto [mrr_single, rolling] = memory_recall_rate(single);
    CHECK(mrr_single == doctest::Approx(double(sh) / sa));
    CHECK(!rolling.empty());

    // disabling memory removes recall entirely
    RuleBasedBackend b3;
    EpisodeOptions options;
    options.use_memory = false;
    auto bare = single_loop_episode(trace, b3, config, options);
    auto [ba, bh] = count(bare);
    CHECK(ba == 0);
    CHECK(bh == 0);
    CHECK(bare.memory_events.empty());
}

TEST_CASE("stable episodes end with consolidated knowledge") {
    auto trace = constant_trace(20);
    RuleBasedBackend backend;
    RoutingConfig config;
    auto log = run_episode(trace, backend, config, LoopSchedule{});
    REQUIRE(!log.knowledge.empty());
    CHECK(log.knowledge[0].scene_id == "scene_0");

    bool repository_closed = false;
    for (const auto& e : log.memory_events) {
        if (e.kind == ComponentKind::KnowledgeRepository &&
            e.phase == LifecyclePhase::Expiration) {
            repository_closed = true;
        }
    }
    CHECK(repository_closed);
}
