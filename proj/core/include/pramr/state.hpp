#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "pramr/modality.hpp"

namespace pramr {

// Routing state for one timestep: the sets U/R/F, activation states,
// raw and smoothed weights, and the gated active set.
struct RoutingState {
    int step = 0;
    ModalitySet usage_set;     // U_t
    ModalitySet reliable_set;  // R_t
    ModalitySet fused_set;     // F_t
    PerModality<bool> states = {false, false, false};  // hysteresis s_i
    PerModality<double> weights = {0.0, 0.0, 0.0};     // w_i
    PerModality<double> smoothed = {0.0, 0.0, 0.0};    // w~_i
    ModalitySet active_set;    // A_t = F_t intersect {s=1}, fallback F_t
    bool fallback_used = false;
    bool degraded = false;

    bool operator==(const RoutingState&) const = default;
};

// Opaque action stub: echoes the active set so the log is complete.
struct DrivingCommand {
    int tick = 0;
    ModalitySet active_set;

    bool operator==(const DrivingCommand&) const = default;
};

nlohmann::json state_to_json(const RoutingState& state);
RoutingState state_from_json(const nlohmann::json& doc);

}  // namespace pramr
