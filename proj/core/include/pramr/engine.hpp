#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pramr/backend.hpp"
#include "pramr/config.hpp"
#include "pramr/decision.hpp"
#include "pramr/memory.hpp"
#include "pramr/state.hpp"

namespace pramr {

struct HysteresisBand {
    PerModality<double> on;   // theta_i + delta
    PerModality<double> off;  // theta_i - delta
};

HysteresisBand make_band(const PerModality<double>& thresholds, double delta);

struct RoutingSets {
    ModalitySet usage;     // U_t
    ModalitySet reliable;  // R_t
    ModalitySet fused;     // F_t
    bool fallback_used = false;
};

// U = {u_i = 1}, R = {r_i >= theta_i}, F = U n R, replaced by R when empty.
RoutingSets build_sets(const RouterDecision& decision, const PerModality<double>& thresholds);

// w_i = r_i / sum_{j in F} r_j for i in F, else 0. Zero-sum F falls back to
// uniform 1/|F|.
PerModality<double> normalize_weights(const PerModality<double>& reliability, ModalitySet fused);

// One hysteresis transition: 0->1 only at r >= theta_on, 1->0 only at
// r <= theta_off, hold otherwise.
PerModality<bool> hysteresis_step(const PerModality<bool>& prev,
                                  const PerModality<double>& reliability,
                                  const HysteresisBand& band);

// Plain thresholding, the hysteresis-free comparison baseline.
PerModality<bool> threshold_step(const PerModality<double>& reliability,
                                 const PerModality<double>& thresholds);

// Single EMA channel with alpha = 1 - exp(-dt/tau).
double ema_step(double prev_smoothed, double weight, double dt, double tau);

struct StepResult {
    RoutingState state;
    RouterDecision decision;
    std::vector<MemoryEvent> events;
    bool recall_attempted = false;
    bool recall_hit = false;
};

// Deterministic core of the routing algorithm, one decision per call:
// recall attempt -> backend scoring -> build_sets -> normalize_weights ->
// hysteresis -> EMA -> active-set gating -> memory update.
class RoutingEngine {
public:
    RoutingEngine(RoutingConfig config, RouterBackend& backend, MemoryStore& memory,
                  bool use_memory = true);

    // dt is the cadence of the invoking loop (deliberative period in
    // dual-loop mode, tick period in single-loop mode).
    StepResult step(const DiagnosticFrame& frame, double dt, const std::string& scene_id);

    const std::optional<RoutingState>& previous() const { return prev_; }
    void reset() { prev_.reset(); }

private:
    RouterDecision score_with_fallback(const DiagnosticFrame& frame,
                                       const MemorySnapshot& context);

    RoutingConfig config_;
    RouterBackend& backend_;
    RuleBasedBackend rule_fallback_;
    MemoryStore& memory_;
    bool use_memory_;
    std::optional<RoutingState> prev_;
};

}  // namespace pramr
