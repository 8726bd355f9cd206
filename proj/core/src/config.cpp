#include "pramr/config.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace pramr {

std::optional<std::string> validate_config(const RoutingConfig& c) {
    for (auto m : kAllModalities) {
        double theta = at(c.thresholds, m);
        if (!(theta >= 0.0 && theta <= 1.0)) {
            return std::string("thresholds.") + std::string(name_of(m));
        }
        if (theta + c.hysteresis_margin > 1.0) {
            return std::string("hysteresis_margin: theta_on > 1 for ") + std::string(name_of(m));
        }
        if (theta - c.hysteresis_margin < 0.0) {
            return std::string("hysteresis_margin: theta_off < 0 for ") + std::string(name_of(m));
        }
    }
    if (!(c.hysteresis_margin >= 0.0)) return "hysteresis_margin";
    if (!(c.tau > 0.0)) return "tau";
    if (!(c.fast_period > 0.0)) return "fast_period";
    if (!(c.slow_period >= c.fast_period)) return "slow_period";
    double k = c.slow_period / c.fast_period;
    if (std::abs(k - std::round(k)) > 1e-9) {
        return "slow_period: not an integer multiple of fast_period";
    }
    if (!(c.recall_ttl >= 0.0)) return "recall_ttl";
    if (!(c.recall_quantization > 0.0 && c.recall_quantization <= 1.0)) {
        return "recall_quantization";
    }
    if (!(c.quality_threshold >= 0.0 && c.quality_threshold <= 1.0)) return "quality_threshold";
    if (c.repository_cap < 1) return "repository_cap";
    return std::nullopt;
}

nlohmann::json config_to_json(const RoutingConfig& c) {
    nlohmann::json thresholds;
    for (auto m : kAllModalities) thresholds[std::string(name_of(m))] = at(c.thresholds, m);
    return {
        {"thresholds", thresholds},
        {"hysteresis_margin", c.hysteresis_margin},
        {"tau", c.tau},
        {"fast_period", c.fast_period},
        {"slow_period", c.slow_period},
        {"recall_ttl", c.recall_ttl},
        {"recall_quantization", c.recall_quantization},
        {"quality_threshold", c.quality_threshold},
        {"repository_cap", c.repository_cap},
    };
}

RoutingConfig config_from_json(const nlohmann::json& doc) {
    RoutingConfig c;
    if (doc.contains("thresholds")) {
        for (auto m : kAllModalities) {
            at(c.thresholds, m) = doc.at("thresholds").at(std::string(name_of(m))).get<double>();
        }
    }
    auto load = [&](const char* key, auto& field) {
        if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
    };
    load("hysteresis_margin", c.hysteresis_margin);
    load("tau", c.tau);
    load("fast_period", c.fast_period);
    load("slow_period", c.slow_period);
    load("recall_ttl", c.recall_ttl);
    load("recall_quantization", c.recall_quantization);
    load("quality_threshold", c.quality_threshold);
    load("repository_cap", c.repository_cap);
    if (auto bad = validate_config(c)) {
        throw std::runtime_error("invalid config: " + *bad);
    }
    return c;
}

RoutingConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    nlohmann::json doc;
    in >> doc;
    return config_from_json(doc);
}

}  // namespace pramr
