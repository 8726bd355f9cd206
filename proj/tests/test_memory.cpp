#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <map>
#include <thread>

#include <nlohmann/json.hpp>

#include "pramr/dual_loop.hpp"
#include "pramr/memory.hpp"
#include "pramr/metrics.hpp"

using namespace pramr;

namespace {

DiagnosticFrame frame_at(double t) {
    DiagnosticFrame f;
    f.timestamp = t;
    f.camera = {0.8, 0.8, 0.8};
    f.lidar = {0.8, 0.2, 0.8};
    f.radar = {0.8, 0.8, 0.2};
    f.external = {0.2, 0.9};
    f.map_complexity = 0.6;
    return f;
}

RouterDecision some_decision() {
    RouterDecision d;
    d.usage = {true, false, true};
    d.reliability = {0.9, 0.4, 0.7};
    d.scene_complexity = 0.5;
    return d;
}

// Checks Generation (Reading|Updating)* Expiration per component instance.
bool lifecycle_legal(const std::vector<MemoryEvent>& events) {
    std::map<ComponentKind, bool> alive;
    for (const auto& e : events) {
        bool live = alive[e.kind];
        switch (e.phase) {
            case LifecyclePhase::Generation:
                if (live) return false;
                alive[e.kind] = true;
                break;
            case LifecyclePhase::Reading:
            case LifecyclePhase::Updating:
                if (!live) return false;
                break;
            case LifecyclePhase::Expiration:
                if (!live) return false;
                alive[e.kind] = false;
                break;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("fresh store yields an empty snapshot at version 0") {
    MemoryStore store;
    auto snap = store.snapshot();
    CHECK(snap.version == 0);
    CHECK(snap.live.empty());
    CHECK(store.events().empty());
}

TEST_CASE("update generates then updates, bumping versions") {
    MemoryStore store;
    auto first = store.update(ComponentKind::PRoutingContext, {{"x", 1}},
                              UpdateTrigger::DiagnosticsArrived, 0.0);
    CHECK(first.phase == LifecyclePhase::Generation);
    CHECK(store.version() == 1);

    auto snap = store.snapshot();
    CHECK(snap.version == 1);
    REQUIRE(snap.has(ComponentKind::PRoutingContext));
    CHECK(snap.live.at(ComponentKind::PRoutingContext).payload.at("x") == 1);

    auto second = store.update(ComponentKind::PRoutingContext, {{"x", 2}},
                               UpdateTrigger::DiagnosticsArrived, 0.5);
    CHECK(second.phase == LifecyclePhase::Updating);
    CHECK(store.version() == 2);
    CHECK(store.peek().live.at(ComponentKind::PRoutingContext).version == 2);
}

TEST_CASE("illegal trigger is rejected") {
    MemoryStore store;
    CHECK_THROWS_AS(store.update(ComponentKind::APolicyLog, {{"cmd", 0}},
                                 UpdateTrigger::ReasoningCycleDone, 0.0),
                    IllegalTriggerError);
}

TEST_CASE("expire maps events to exactly the right components") {
    MemoryStore store;
    store.update(ComponentKind::PRoutingContext, {}, UpdateTrigger::DiagnosticsArrived, 0.0);
    store.update(ComponentKind::PSemanticCache, {}, UpdateTrigger::DeepPerceptionResult, 0.1);
    store.update(ComponentKind::RSceneRecord, {}, UpdateTrigger::ReasoningCycleDone, 0.2);
    store.update(ComponentKind::RSeedState, {}, UpdateTrigger::ContextChange, 0.3);
    store.update(ComponentKind::APolicyLog, {}, UpdateTrigger::ControlCycle, 0.4);

    auto expired = store.expire(1.0, ExpireEvent::RoutingDecisionCompleted);
    REQUIRE(expired.size() == 1);
    CHECK(expired[0].kind == ComponentKind::PRoutingContext);

    expired = store.expire(2.0, ExpireEvent::SceneEnd);
    CHECK(expired.size() == 3);  // scene record, seed state, policy log
    auto snap = store.peek();
    CHECK(!snap.has(ComponentKind::RSceneRecord));
    CHECK(!snap.has(ComponentKind::RSeedState));
    CHECK(!snap.has(ComponentKind::APolicyLog));
    CHECK(snap.has(ComponentKind::PSemanticCache));

    expired = store.expire(3.0, ExpireEvent::ReasoningCycleCompleted);
    REQUIRE(expired.size() == 1);
    CHECK(expired[0].kind == ComponentKind::PSemanticCache);

    // empty store: no events
    CHECK(store.expire(4.0, ExpireEvent::SceneEnd).empty());
}

TEST_CASE("route reset expires only the seed state") {
    MemoryStore store;
    store.update(ComponentKind::RSeedState, {}, UpdateTrigger::ContextChange, 0.0);
    store.update(ComponentKind::RSceneRecord, {}, UpdateTrigger::ReasoningCycleDone, 0.1);
    auto expired = store.expire(1.0, ExpireEvent::RouteReset);
    REQUIRE(expired.size() == 1);
    CHECK(expired[0].kind == ComponentKind::RSeedState);
}

TEST_CASE("recall hit within ttl, miss after and for unknown keys") {
    MemoryStore store;
    auto key = make_recall_key(frame_at(1.0), "scene_0", 0.1);
    store.store_recall(key, some_decision(), 1.0);

    auto hit = store.recall(key, 3.0, 5.0);
    REQUIRE(hit.has_value());
    CHECK(hit->source == DecisionSource::MemoryRecall);
    CHECK(hit->reliability == some_decision().reliability);

    CHECK(!store.recall(key, 7.0, 5.0).has_value());

    auto other = make_recall_key(frame_at(1.0), "scene_1", 0.1);
    CHECK(!store.recall(other, 3.0, 5.0).has_value());
}

TEST_CASE("recall keys quantize indicator values") {
    auto a = frame_at(0.0);
    auto b = frame_at(9.0);
    b.camera.brightness_mean += 0.04;  // same 0.1-wide bucket
    CHECK(make_recall_key(a, "s", 0.1) == make_recall_key(b, "s", 0.1));
    b.camera.brightness_mean = a.camera.brightness_mean + 0.15;
    CHECK(!(make_recall_key(a, "s", 0.1) == make_recall_key(b, "s", 0.1)));
}

TEST_CASE("snapshot readers never observe a partial or regressing version") {
    MemoryStore store;
    std::atomic<bool> done{false};
    std::atomic<bool> failed{false};

    std::thread reader([&] {
        int last = 0;
        while (!done.load()) {
            auto snap = store.peek();
            if (snap.version < last) failed.store(true);
            last = snap.version;
            // a committed routing context always carries both fields
            if (snap.has(ComponentKind::PRoutingContext)) {
                const auto& payload = snap.live.at(ComponentKind::PRoutingContext).payload;
                if (!payload.contains("a") || !payload.contains("b")) failed.store(true);
            }
        }
    });

    for (int i = 0; i < 2000; ++i) {
        store.update(ComponentKind::PRoutingContext, {{"a", i}, {"b", i}},
                     UpdateTrigger::DiagnosticsArrived, i * 0.001);
    }
    done.store(true);
    reader.join();
    CHECK(!failed.load());
    CHECK(store.version() == 2000);
}

TEST_CASE("knowledge repository caps with oldest-first eviction") {
    MemoryStore store;
    for (int i = 0; i < 5; ++i) {
        KnowledgeEntry e;
        e.scene_id = "scene_" + std::to_string(i);
        e.created_at = i;
        store.add_knowledge(e, i, 3);
    }
    REQUIRE(store.knowledge().size() == 3);
    CHECK(store.knowledge().front().scene_id == "scene_2");
    CHECK(store.knowledge().back().scene_id == "scene_4");
}

TEST_CASE("knowledge file round-trip") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "pramr_memory_test";
    fs::create_directories(dir);
    auto path = (dir / "knowledge.jsonl").string();

    MemoryStore store;
    KnowledgeEntry e;
    e.scene_id = "scene_0";
    e.mean_complexity = 0.61;
    e.active_set = ModalitySet{0x5};
    e.final_weights = {0.5, 0.2, 0.3};
    e.rsi = 0.93;
    e.created_at = 42.0;
    store.add_knowledge(e, 42.0, 8);
    store.save_knowledge(path);

    MemoryStore loaded;
    loaded.load_knowledge(path);
    REQUIRE(loaded.knowledge().size() == 1);
    CHECK(loaded.knowledge()[0].scene_id == "scene_0");
    CHECK(loaded.knowledge()[0].active_set == ModalitySet{0x5});
    CHECK(loaded.knowledge()[0].rsi == doctest::Approx(0.93));
    fs::remove_all(dir);
}

TEST_CASE("store-level event stream stays lifecycle-legal") {
    MemoryStore store;
    store.update(ComponentKind::PRoutingContext, {}, UpdateTrigger::DiagnosticsArrived, 0.0);
    store.snapshot();
    store.expire(0.5, ExpireEvent::RoutingDecisionCompleted);
    store.update(ComponentKind::PRoutingContext, {}, UpdateTrigger::DiagnosticsArrived, 1.0);
    store.expire(1.5, ExpireEvent::RoutingDecisionCompleted);
    CHECK(lifecycle_legal(store.events()));
}

TEST_CASE("consolidate stores only scenes above the quality threshold") {
    // Build a two-scene log by hand: scene_0 perfectly stable, scene_1 noisy.
    EpisodeLog log;
    for (int i = 0; i < 10; ++i) {
        EpisodeRecord r;
        r.tick = i;
        r.t = i * 0.5;
        r.scene_id = i < 5 ? "scene_0" : "scene_1";
        r.decision.scene_complexity = i < 5 ? 0.2 : 0.8;
        r.state.active_set = ModalitySet{0x3};
        if (i < 5) {
            r.state.smoothed = {0.5, 0.5, 0.0};  // per-tick RSI = 1
        } else {
            r.state.smoothed = {0.95, 0.05, 0.0};  // heavily skewed, RSI = 0.1
        }
        log.records.push_back(r);
    }
    auto entries = consolidate(log, 0.9);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].scene_id == "scene_0");
    CHECK(entries[0].rsi == doctest::Approx(1.0));
    CHECK(entries[0].mean_complexity == doctest::Approx(0.2));
    CHECK(entries[0].active_set == ModalitySet{0x3});

    CHECK(consolidate(EpisodeLog{}, 0.9).empty());
}
