#include "pramr/engine.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "pramr/state.hpp"

namespace pramr {

HysteresisBand make_band(const PerModality<double>& thresholds, double delta) {
    HysteresisBand band;
    for (auto m : kAllModalities) {
        at(band.on, m) = at(thresholds, m) + delta;
        at(band.off, m) = at(thresholds, m) - delta;
    }
    return band;
}

RoutingSets build_sets(const RouterDecision& decision, const PerModality<double>& thresholds) {
    RoutingSets sets;
    for (auto m : kAllModalities) {
        if (at(decision.usage, m)) sets.usage.insert(m);
        if (at(decision.reliability, m) >= at(thresholds, m)) sets.reliable.insert(m);
    }
    sets.fused = sets.usage & sets.reliable;
    if (sets.fused.empty()) {
        sets.fused = sets.reliable;
        sets.fallback_used = true;
    }
    return sets;
}

PerModality<double> normalize_weights(const PerModality<double>& reliability, ModalitySet fused) {
    PerModality<double> w = {0.0, 0.0, 0.0};
    if (fused.empty()) return w;
    double sum = 0.0;
    for (auto m : kAllModalities) {
        if (fused.contains(m)) sum += at(reliability, m);
    }
    for (auto m : kAllModalities) {
        if (!fused.contains(m)) continue;
        at(w, m) = sum > 0.0 ? at(reliability, m) / sum : 1.0 / fused.size();
    }
    return w;
}

PerModality<bool> hysteresis_step(const PerModality<bool>& prev,
                                  const PerModality<double>& reliability,
                                  const HysteresisBand& band) {
    PerModality<bool> next = prev;
    for (auto m : kAllModalities) {
        double r = at(reliability, m);
        if (!at(prev, m) && r >= at(band.on, m)) {
            at(next, m) = true;
        } else if (at(prev, m) && r <= at(band.off, m)) {
            at(next, m) = false;
        }
    }
    return next;
}

PerModality<bool> threshold_step(const PerModality<double>& reliability,
                                 const PerModality<double>& thresholds) {
    PerModality<bool> s;
    for (auto m : kAllModalities) at(s, m) = at(reliability, m) >= at(thresholds, m);
    return s;
}

double ema_step(double prev_smoothed, double weight, double dt, double tau) {
    double alpha = 1.0 - std::exp(-dt / tau);
    return alpha * weight + (1.0 - alpha) * prev_smoothed;
}

RoutingEngine::RoutingEngine(RoutingConfig config, RouterBackend& backend, MemoryStore& memory,
                             bool use_memory)
    : config_(std::move(config)), backend_(backend), memory_(memory), use_memory_(use_memory) {
    if (auto bad = validate_config(config_)) {
        throw std::invalid_argument("invalid config: " + *bad);
    }
}

RouterDecision RoutingEngine::score_with_fallback(const DiagnosticFrame& frame,
                                                  const MemorySnapshot& context) {
    try {
        return backend_.score(frame, context);
    } catch (const BackendError&) {
        if (backend_.name() != "remote") throw;
        // The reactive path must never stall on a remote failure.
        return rule_fallback_.score(frame, context);
    }
}

StepResult RoutingEngine::step(const DiagnosticFrame& frame, double dt,
                               const std::string& scene_id) {
    StepResult result;
    double now = frame.timestamp;
    std::size_t events_before = memory_.events().size();

    std::optional<RouterDecision> decision;
    RecallKey key;
    if (use_memory_) {
        // Diagnostics arrival opens (or refreshes) the routing context before
        // the decision is made; the decision is folded in afterwards and the
        // instance expires once the round completes.
        memory_.update(ComponentKind::PRoutingContext,
                       {{"frame", frame_to_json(frame)}, {"scene_id", scene_id}},
                       UpdateTrigger::DiagnosticsArrived, now);
        key = make_recall_key(frame, scene_id, config_.recall_quantization);
        result.recall_attempted = true;
        decision = memory_.recall(key, now, config_.recall_ttl);
        result.recall_hit = decision.has_value();
    }
    if (!decision) {
        MemorySnapshot context = use_memory_ ? memory_.snapshot() : MemorySnapshot{};
        decision = score_with_fallback(frame, context);
        if (use_memory_) memory_.store_recall(key, *decision, now);
    }

    RoutingSets sets = build_sets(*decision, config_.thresholds);

    RoutingState state;
    state.step = prev_ ? prev_->step + 1 : 0;
    state.usage_set = sets.usage;
    state.reliable_set = sets.reliable;
    state.fused_set = sets.fused;
    state.fallback_used = sets.fallback_used;
    state.weights = normalize_weights(decision->reliability, sets.fused);

    if (prev_) {
        state.states = hysteresis_step(prev_->states, decision->reliability,
                                       make_band(config_.thresholds, config_.hysteresis_margin));
        for (auto m : kAllModalities) {
            at(state.smoothed, m) =
                ema_step(at(prev_->smoothed, m), at(state.weights, m), dt, config_.tau);
        }
    } else {
        // t = 0: plain threshold initialization, smoothed weights seed at w.
        state.states = threshold_step(decision->reliability, config_.thresholds);
        state.smoothed = state.weights;
    }

    if (sets.fused.empty()) {
        // Doubly-empty degenerate case: never sense with zero modalities.
        state.degraded = true;
        state.active_set = prev_ && !prev_->active_set.empty() ? prev_->active_set
                                                               : ModalitySet::all();
    } else {
        ModalitySet gated;
        for (auto m : kAllModalities) {
            if (sets.fused.contains(m) && at(state.states, m)) gated.insert(m);
        }
        state.active_set = gated.empty() ? sets.fused : gated;
    }

    if (use_memory_) {
        nlohmann::json payload = {
            {"frame", frame_to_json(frame)},
            {"decision", decision_to_json(*decision)},
            {"state", state_to_json(state)},
            {"scene_id", scene_id},
        };
        memory_.update(ComponentKind::PRoutingContext, std::move(payload),
                       UpdateTrigger::DiagnosticsArrived, now);
        memory_.expire(now, ExpireEvent::RoutingDecisionCompleted);
    }

    result.state = state;
    result.decision = *decision;
    result.events.assign(memory_.events().begin() + events_before, memory_.events().end());
    prev_ = state;
    return result;
}

}  // namespace pramr
