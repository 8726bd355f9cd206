#include "pramr/memory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "jsonl.hpp"

namespace pramr {

std::string_view name_of(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::PRoutingContext: return "p_routing_context";
        case ComponentKind::PSemanticCache: return "p_semantic_cache";
        case ComponentKind::RSceneRecord: return "r_scene_record";
        case ComponentKind::RSeedState: return "r_seed_state";
        case ComponentKind::APolicyLog: return "a_policy_log";
        case ComponentKind::KnowledgeRepository: return "knowledge_repository";
    }
    return "?";
}

std::string_view name_of(LifecyclePhase phase) {
    switch (phase) {
        case LifecyclePhase::Generation: return "generation";
        case LifecyclePhase::Reading: return "reading";
        case LifecyclePhase::Updating: return "updating";
        case LifecyclePhase::Expiration: return "expiration";
    }
    return "?";
}

namespace {

bool trigger_legal(ComponentKind kind, UpdateTrigger trigger) {
    switch (kind) {
        case ComponentKind::PRoutingContext: return trigger == UpdateTrigger::DiagnosticsArrived;
        case ComponentKind::PSemanticCache: return trigger == UpdateTrigger::DeepPerceptionResult;
        case ComponentKind::RSceneRecord: return trigger == UpdateTrigger::ReasoningCycleDone;
        case ComponentKind::RSeedState: return trigger == UpdateTrigger::ContextChange;
        case ComponentKind::APolicyLog: return trigger == UpdateTrigger::ControlCycle;
        case ComponentKind::KnowledgeRepository: return trigger == UpdateTrigger::Consolidation;
    }
    return false;
}

std::string_view trigger_name(UpdateTrigger trigger) {
    switch (trigger) {
        case UpdateTrigger::DiagnosticsArrived: return "new diagnostics or context";
        case UpdateTrigger::DeepPerceptionResult: return "new deep-perception result";
        case UpdateTrigger::ReasoningCycleDone: return "reasoning cycle completed";
        case UpdateTrigger::ContextChange: return "context change or refresh";
        case UpdateTrigger::ControlCycle: return "control cycle";
        case UpdateTrigger::Consolidation: return "consolidation";
    }
    return "?";
}

std::string_view event_name(ExpireEvent event) {
    switch (event) {
        case ExpireEvent::RoutingDecisionCompleted: return "routing decision completed";
        case ExpireEvent::ReasoningCycleCompleted: return "reasoning cycle completed";
        case ExpireEvent::SceneEnd: return "scene end";
        case ExpireEvent::RouteReset: return "route reset";
    }
    return "?";
}

bool expires_on(ComponentKind kind, ExpireEvent event) {
    switch (kind) {
        case ComponentKind::PRoutingContext:
            return event == ExpireEvent::RoutingDecisionCompleted;
        case ComponentKind::PSemanticCache:
            return event == ExpireEvent::ReasoningCycleCompleted;
        case ComponentKind::RSceneRecord:
        case ComponentKind::APolicyLog:
            return event == ExpireEvent::SceneEnd;
        case ComponentKind::RSeedState:
            return event == ExpireEvent::SceneEnd || event == ExpireEvent::RouteReset;
        case ComponentKind::KnowledgeRepository:
            return false;  // expires only via pruning / dataset management
    }
    return false;
}

int quantize(double v, double width) {
    return static_cast<int>(std::floor(std::min(v, 1.0 - 1e-12) / width));
}

}  // namespace

RecallKey make_recall_key(const DiagnosticFrame& f, const std::string& scene_id,
                          double quantization) {
    const double values[] = {
        f.camera.brightness_mean, f.camera.contrast,      f.camera.edge_density,
        f.lidar.point_density,    f.lidar.noise_ratio,    f.lidar.reflectivity_ratio,
        f.radar.target_density,   f.radar.rcs_stability,  f.radar.detection_probability,
        f.external.weather_severity, f.external.illumination, f.map_complexity,
    };
    std::string key = scene_id;
    for (double v : values) {
        key += '|';
        key += std::to_string(quantize(v, quantization));
    }
    return RecallKey{std::move(key)};
}

nlohmann::json knowledge_entry_to_json(const KnowledgeEntry& e) {
    nlohmann::json weights;
    for (auto m : kAllModalities) weights[std::string(name_of(m))] = at(e.final_weights, m);
    return {
        {"scene_id", e.scene_id},
        {"mean_complexity", e.mean_complexity},
        {"active_set", e.active_set.bits()},
        {"final_weights", weights},
        {"rsi", e.rsi},
        {"created_at", e.created_at},
    };
}

KnowledgeEntry knowledge_entry_from_json(const nlohmann::json& doc) {
    KnowledgeEntry e;
    e.scene_id = doc.at("scene_id").get<std::string>();
    e.mean_complexity = doc.at("mean_complexity").get<double>();
    e.active_set = ModalitySet{doc.at("active_set").get<std::uint8_t>()};
    for (auto m : kAllModalities) {
        at(e.final_weights, m) = doc.at("final_weights").at(std::string(name_of(m))).get<double>();
    }
    e.rsi = doc.at("rsi").get<double>();
    e.created_at = doc.at("created_at").get<double>();
    return e;
}

MemoryEvent MemoryStore::log_event(double now, ComponentKind kind, LifecyclePhase phase,
                                   std::string trigger) {
    MemoryEvent event{now, kind, phase, std::move(trigger)};
    events_.push_back(event);
    return event;
}

MemorySnapshot MemoryStore::snapshot() {
    std::lock_guard lock(mutex_);
    for (const auto& [kind, component] : live_) {
        log_event(committed_at_, kind, LifecyclePhase::Reading, "snapshot");
    }
    return MemorySnapshot{version_, committed_at_, live_};
}

MemorySnapshot MemoryStore::peek() const {
    std::lock_guard lock(mutex_);
    return MemorySnapshot{version_, committed_at_, live_};
}

std::optional<RouterDecision> MemoryStore::recall(const RecallKey& key, double now, double ttl) {
    std::lock_guard lock(mutex_);
    auto it = recall_cache_.find(key);
    if (it == recall_cache_.end()) return std::nullopt;
    if (now - it->second.stored_at > ttl) return std::nullopt;
    if (live_.count(ComponentKind::PRoutingContext)) {
        log_event(now, ComponentKind::PRoutingContext, LifecyclePhase::Reading, "recall hit");
    }
    RouterDecision d = it->second.decision;
    d.source = DecisionSource::MemoryRecall;
    return d;
}

void MemoryStore::store_recall(const RecallKey& key, const RouterDecision& decision, double now) {
    std::lock_guard lock(mutex_);
    recall_cache_[key] = CacheEntry{decision, now};
}

MemoryEvent MemoryStore::update(ComponentKind kind, nlohmann::json payload, UpdateTrigger trigger,
                                double now) {
    if (!trigger_legal(kind, trigger)) {
        throw IllegalTriggerError(std::string("illegal trigger '") +
                                  std::string(trigger_name(trigger)) + "' for component " +
                                  std::string(name_of(kind)));
    }
    std::lock_guard lock(mutex_);
    auto it = live_.find(kind);
    bool fresh = it == live_.end();
    int version = ++next_version_[kind];
    if (fresh) {
        live_[kind] = MemoryComponent{kind, std::move(payload), version, now, now};
    } else {
        it->second.payload = std::move(payload);
        it->second.version = version;
        it->second.updated_at = now;
    }
    ++version_;
    committed_at_ = now;
    return log_event(now, kind, fresh ? LifecyclePhase::Generation : LifecyclePhase::Updating,
                     std::string(trigger_name(trigger)));
}

std::vector<MemoryEvent> MemoryStore::expire(double now, ExpireEvent event) {
    std::lock_guard lock(mutex_);
    std::vector<MemoryEvent> out;
    for (auto it = live_.begin(); it != live_.end();) {
        if (expires_on(it->first, event)) {
            out.push_back(log_event(now, it->first, LifecyclePhase::Expiration,
                                    std::string(event_name(event))));
            it = live_.erase(it);
        } else {
            ++it;
        }
    }
    if (!out.empty()) {
        ++version_;
        committed_at_ = now;
    }
    if (event == ExpireEvent::SceneEnd || event == ExpireEvent::RouteReset) {
        recall_cache_.clear();
    }
    return out;
}

void MemoryStore::add_knowledge(const KnowledgeEntry& entry, double now, int cap) {
    std::lock_guard lock(mutex_);
    bool fresh = knowledge_.empty() && !live_.count(ComponentKind::KnowledgeRepository);
    knowledge_.push_back(entry);
    while (cap > 0 && static_cast<int>(knowledge_.size()) > cap) {
        knowledge_.erase(knowledge_.begin());
    }
    nlohmann::json payload = nlohmann::json::array();
    for (const auto& e : knowledge_) payload.push_back(knowledge_entry_to_json(e));
    int version = ++next_version_[ComponentKind::KnowledgeRepository];
    live_[ComponentKind::KnowledgeRepository] =
        MemoryComponent{ComponentKind::KnowledgeRepository, std::move(payload), version,
                        fresh ? now : live_[ComponentKind::KnowledgeRepository].created_at, now};
    ++version_;
    committed_at_ = now;
    log_event(now, ComponentKind::KnowledgeRepository,
              fresh ? LifecyclePhase::Generation : LifecyclePhase::Updating, "consolidation");
}

std::vector<MemoryEvent> MemoryStore::close_repository(double now) {
    std::lock_guard lock(mutex_);
    std::vector<MemoryEvent> out;
    if (live_.count(ComponentKind::KnowledgeRepository)) {
        out.push_back(log_event(now, ComponentKind::KnowledgeRepository,
                                LifecyclePhase::Expiration, "dataset management"));
        live_.erase(ComponentKind::KnowledgeRepository);
        ++version_;
        committed_at_ = now;
    }
    return out;
}

void MemoryStore::load_knowledge(const std::string& path) {
    std::lock_guard lock(mutex_);
    knowledge_.clear();
    detail::read_jsonl(path, [&](const nlohmann::json& doc) {
        knowledge_.push_back(knowledge_entry_from_json(doc));
    });
}

void MemoryStore::save_knowledge(const std::string& path) const {
    std::lock_guard lock(mutex_);
    detail::write_jsonl(path, [&](std::size_t i, nlohmann::json& doc) {
        if (i >= knowledge_.size()) return false;
        doc = knowledge_entry_to_json(knowledge_[i]);
        return true;
    });
}

int MemoryStore::version() const {
    std::lock_guard lock(mutex_);
    return version_;
}

void write_memory_events_csv(const std::string& path, const std::vector<MemoryEvent>& events) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "timestamp,component,phase,trigger\n";
    char buf[64];
    for (const auto& e : events) {
        std::snprintf(buf, sizeof(buf), "%.9g", e.timestamp);
        out << buf << ',' << name_of(e.kind) << ',' << name_of(e.phase) << ',' << e.trigger
            << '\n';
    }
}

}  // namespace pramr
