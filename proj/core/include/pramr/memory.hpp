#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pramr/decision.hpp"
#include "pramr/frame.hpp"
#include "pramr/modality.hpp"

namespace pramr {

enum class ComponentKind {
    PRoutingContext,
    PSemanticCache,
    RSceneRecord,
    RSeedState,
    APolicyLog,
    KnowledgeRepository,
};

std::string_view name_of(ComponentKind kind);

enum class LifecyclePhase { Generation, Reading, Updating, Expiration };

std::string_view name_of(LifecyclePhase phase);

// Legal update triggers, one family per component kind.
enum class UpdateTrigger {
    DiagnosticsArrived,    // P-Routing Context: new diagnostics or context
    DeepPerceptionResult,  // P-Semantic Cache
    ReasoningCycleDone,    // R-Scene Record: after every reasoning cycle
    ContextChange,         // R-Seed State: significant context change or refresh
    ControlCycle,          // A-Policy Log: each control cycle
    Consolidation,         // Knowledge Repository
};

enum class ExpireEvent {
    RoutingDecisionCompleted,  // expires P-Routing Context
    ReasoningCycleCompleted,   // expires P-Semantic Cache
    SceneEnd,                  // expires R-Scene Record, R-Seed State, A-Policy Log
    RouteReset,                // expires R-Seed State
};

struct MemoryEvent {
    double timestamp = 0.0;
    ComponentKind kind = ComponentKind::PRoutingContext;
    LifecyclePhase phase = LifecyclePhase::Generation;
    std::string trigger;
};

struct MemoryComponent {
    ComponentKind kind;
    nlohmann::json payload;
    int version = 0;
    double created_at = 0.0;
    double updated_at = 0.0;
};

// Consistent read-only view of all live components.
struct MemorySnapshot {
    int version = 0;           // store version at commit time
    double committed_at = 0.0; // timestamp of the last committed write
    std::map<ComponentKind, MemoryComponent> live;

    bool has(ComponentKind kind) const { return live.count(kind) > 0; }
};

// Exact-match key over quantized contextual indicators plus scene id.
struct RecallKey {
    std::string value;
    bool operator==(const RecallKey&) const = default;
    bool operator<(const RecallKey& o) const { return value < o.value; }
};

RecallKey make_recall_key(const DiagnosticFrame& frame, const std::string& scene_id,
                          double quantization);

struct KnowledgeEntry {
    std::string scene_id;
    double mean_complexity = 0.0;
    ModalitySet active_set;
    PerModality<double> final_weights = {0.0, 0.0, 0.0};
    double rsi = 0.0;
    double created_at = 0.0;
};

nlohmann::json knowledge_entry_to_json(const KnowledgeEntry& entry);
KnowledgeEntry knowledge_entry_from_json(const nlohmann::json& doc);

class IllegalTriggerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Six-component hierarchical memory with the event-driven lifecycle.
// Single writer (the deliberative loop), any number of snapshot readers.
class MemoryStore {
public:
    MemoryStore() = default;

    // Immutable view at the last committed version. Logs one Reading event
    // per live component.
    MemorySnapshot snapshot();

    // View without Reading events, for metrics/diagnostic consumers.
    MemorySnapshot peek() const;

    std::optional<RouterDecision> recall(const RecallKey& key, double now, double ttl);
    void store_recall(const RecallKey& key, const RouterDecision& decision, double now);

    // Installs payload, bumps versions, emits Updating (Generation if first).
    // Throws IllegalTriggerError when trigger does not belong to kind.
    MemoryEvent update(ComponentKind kind, nlohmann::json payload, UpdateTrigger trigger,
                       double now);

    // Expires exactly the components matching the event's trigger condition.
    std::vector<MemoryEvent> expire(double now, ExpireEvent event);

    // Appends entries to the knowledge repository (size-capped, oldest-first
    // eviction) and emits the corresponding lifecycle events.
    void add_knowledge(const KnowledgeEntry& entry, double now, int cap);

    // Flushes and expires the knowledge repository (dataset management).
    std::vector<MemoryEvent> close_repository(double now);

    const std::vector<KnowledgeEntry>& knowledge() const { return knowledge_; }
    void load_knowledge(const std::string& path);
    void save_knowledge(const std::string& path) const;

    const std::vector<MemoryEvent>& events() const { return events_; }
    int version() const;

private:
    MemoryEvent log_event(double now, ComponentKind kind, LifecyclePhase phase,
                          std::string trigger);

    mutable std::mutex mutex_;
    std::map<ComponentKind, MemoryComponent> live_;
    std::map<ComponentKind, int> next_version_;
    int version_ = 0;
    double committed_at_ = 0.0;

    struct CacheEntry {
        RouterDecision decision;
        double stored_at = 0.0;
    };
    std::map<RecallKey, CacheEntry> recall_cache_;

    std::vector<KnowledgeEntry> knowledge_;
    std::vector<MemoryEvent> events_;
};

void write_memory_events_csv(const std::string& path, const std::vector<MemoryEvent>& events);

struct EpisodeLog;

// One repository entry per scene whose mean per-tick RSI meets the quality
// threshold: scene descriptor plus the final smoothed weights.
std::vector<KnowledgeEntry> consolidate(const EpisodeLog& episode, double quality_threshold);

}  // namespace pramr
