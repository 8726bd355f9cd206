#include "pramr/dual_loop.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pramr/engine.hpp"

namespace pramr {

namespace {

int cadence_ratio(double fast, double slow) {
    double k = slow / fast;
    int rounded = static_cast<int>(std::llround(k));
    if (rounded < 1 || std::abs(k - rounded) > 1e-9) {
        throw std::invalid_argument("slow period must be an integer multiple of the fast period");
    }
    return rounded;
}

struct HistoryEntry {
    DiagnosticFrame frame;
    RoutingState state;
};

}  // namespace

EpisodeLog run_episode(const std::vector<DiagnosticFrame>& trace, RouterBackend& backend,
                       const RoutingConfig& config, const LoopSchedule& schedule,
                       const EpisodeOptions& options) {
    if (auto bad = validate_trace(trace)) {
        throw std::invalid_argument("invalid trace: " + *bad);
    }
    const int k = cadence_ratio(schedule.fast_period, schedule.slow_period);

    RoutingConfig engine_config = config;
    engine_config.fast_period = schedule.fast_period;
    engine_config.slow_period = schedule.slow_period;

    MemoryStore memory;
    RoutingEngine engine(engine_config, backend, memory, options.use_memory);

    EpisodeLog log;
    std::deque<HistoryEntry> history;  // last deliberative window of fast ticks

    // Last deliberative commit visible to the reactive loop.
    RoutingState visible_state;
    RouterDecision visible_decision;
    double visible_tau = 0.0;
    int visible_version = 0;
    bool committed = false;

    // Commit computed at a slow tick, visible after the simulated latency.
    struct PendingCommit {
        double visible_at;
        RoutingState state;
        RouterDecision decision;
        double tau;
        int version;
        bool recall_attempted;
        bool recall_hit;
    };
    std::optional<PendingCommit> pending;

    std::size_t scene_index = 0;
    std::size_t next_scene_end = 0;
    double last_seed_complexity = -1.0;
    bool scene_open = false;

    auto scene_id = [&] { return "scene_" + std::to_string(scene_index); };

    for (std::size_t i = 0; i < trace.size(); ++i) {
        const DiagnosticFrame& frame = trace[i];
        double t = frame.timestamp;

        // Scene boundary crossed: close the scene before this tick.
        while (next_scene_end < schedule.scene_ends.size() &&
               t >= schedule.scene_ends[next_scene_end]) {
            if (options.use_memory && scene_open) {
                auto events = memory.expire(schedule.scene_ends[next_scene_end],
                                            ExpireEvent::SceneEnd);
                (void)events;
            }
            ++next_scene_end;
            ++scene_index;
            scene_open = false;
            last_seed_complexity = -1.0;
        }

        // Apply a deliberative commit once its visibility time arrives.
        bool recall_attempted = false;
        bool recall_hit = false;
        bool deliberative = false;
        if (pending && t >= pending->visible_at - 1e-9) {
            visible_state = pending->state;
            visible_decision = pending->decision;
            visible_tau = pending->tau;
            visible_version = pending->version;
            committed = true;
            pending.reset();
        }

        if (i % static_cast<std::size_t>(k) == 0) {
            deliberative = true;
            StepResult step = engine.step(frame, schedule.slow_period, scene_id());
            recall_attempted = step.recall_attempted;
            recall_hit = step.recall_hit;
            scene_open = true;

            if (options.use_memory) {
                // Deep-perception stub feeding the semantic cache, then the
                // reasoning-cycle bookkeeping for the mid-term components.
                memory.update(ComponentKind::PSemanticCache,
                              {{"active_set", step.state.active_set.bits()},
                               {"tick", static_cast<int>(i)}},
                              UpdateTrigger::DeepPerceptionResult, t);
                memory.update(ComponentKind::RSceneRecord,
                              {{"scene_id", scene_id()},
                               {"complexity", step.decision.scene_complexity},
                               {"window", static_cast<int>(history.size())}},
                              UpdateTrigger::ReasoningCycleDone, t);
                if (last_seed_complexity < 0.0 ||
                    std::abs(step.decision.scene_complexity - last_seed_complexity) >= 0.2) {
                    memory.update(ComponentKind::RSeedState,
                                  {{"complexity", step.decision.scene_complexity}},
                                  UpdateTrigger::ContextChange, t);
                    last_seed_complexity = step.decision.scene_complexity;
                }
                memory.expire(t, ExpireEvent::ReasoningCycleCompleted);
            }

            double visible_at = t + (schedule.simulated_time ? schedule.deliberative_latency : 0.0);
            PendingCommit commit{visible_at, step.state,    step.decision, t,
                                 memory.version(), recall_attempted, recall_hit};
            if (visible_at <= t + 1e-9) {
                visible_state = commit.state;
                visible_decision = commit.decision;
                visible_tau = commit.tau;
                visible_version = commit.version;
                committed = true;
            } else {
                pending = commit;
            }
        }

        if (options.use_memory && committed) {
            memory.update(ComponentKind::APolicyLog,
                          {{"tick", static_cast<int>(i)},
                           {"active_set", visible_state.active_set.bits()}},
                          UpdateTrigger::ControlCycle, t);
        }

        history.push_back({frame, visible_state});
        while (static_cast<int>(history.size()) > k) history.pop_front();

        EpisodeRecord record;
        record.tick = static_cast<int>(i);
        record.t = t;
        record.memory_tau = visible_tau;
        record.memory_version = visible_version;
        record.scene_id = scene_id();
        record.frame = frame;
        record.decision = visible_decision;
        record.state = visible_state;
        record.deliberative = deliberative;
        record.recall_attempted = recall_attempted;
        record.recall_hit = recall_hit;
        record.command = DrivingCommand{static_cast<int>(i), visible_state.active_set};
        log.records.push_back(std::move(record));
    }

    // Close the final scene and consolidate long-term knowledge.
    double t_end = trace.empty() ? 0.0 : trace.back().timestamp;
    if (options.use_memory && scene_open) {
        memory.expire(t_end, ExpireEvent::SceneEnd);
    }
    if (options.use_memory && options.consolidate && !log.records.empty()) {
        for (const auto& entry : consolidate(log, config.quality_threshold)) {
            KnowledgeEntry stamped = entry;
            stamped.created_at = t_end;
            memory.add_knowledge(stamped, t_end, config.repository_cap);
        }
        memory.close_repository(t_end);
    }

    log.memory_events = memory.events();
    log.knowledge = memory.knowledge();
    return log;
}

EpisodeLog single_loop_episode(const std::vector<DiagnosticFrame>& trace, RouterBackend& backend,
                               const RoutingConfig& config, const EpisodeOptions& options) {
    LoopSchedule schedule;
    schedule.fast_period = config.fast_period;
    schedule.slow_period = config.fast_period;  // routing at every tick
    return run_episode(trace, backend, config, schedule, options);
}

}  // namespace pramr
