#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "pramr/modality.hpp"

namespace pramr {

struct RoutingConfig {
    PerModality<double> thresholds = {0.5, 0.5, 0.5};
    double hysteresis_margin = 0.05;  // delta; theta_on = theta + delta, theta_off = theta - delta
    double tau = 1.0;                 // EMA smoothing time constant, seconds
    double fast_period = 0.5;         // reactive tick, seconds (2 Hz)
    double slow_period = 1.0;         // deliberative tick, seconds (1 Hz), multiple of fast_period
    double recall_ttl = 5.0;          // short-term reuse window, seconds
    double recall_quantization = 0.1; // indicator bucket width for recall keys
    double quality_threshold = 0.6;   // min mean scene RSI for knowledge consolidation
    int repository_cap = 64;          // knowledge repository size cap, oldest-first eviction
};

// Returns the first violated constraint, or nullopt when valid.
std::optional<std::string> validate_config(const RoutingConfig& config);

nlohmann::json config_to_json(const RoutingConfig& config);
RoutingConfig config_from_json(const nlohmann::json& doc);

RoutingConfig read_config(const std::string& path);

}  // namespace pramr
