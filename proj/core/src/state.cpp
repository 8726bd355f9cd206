#include "pramr/state.hpp"

#include <nlohmann/json.hpp>

namespace pramr {

nlohmann::json state_to_json(const RoutingState& s) {
    nlohmann::json states, weights, smoothed;
    for (auto m : kAllModalities) {
        const auto key = std::string(name_of(m));
        states[key] = at(s.states, m) ? 1 : 0;
        weights[key] = at(s.weights, m);
        smoothed[key] = at(s.smoothed, m);
    }
    return {
        {"step", s.step},
        {"usage_set", s.usage_set.bits()},
        {"reliable_set", s.reliable_set.bits()},
        {"fused_set", s.fused_set.bits()},
        {"states", states},
        {"weights", weights},
        {"smoothed", smoothed},
        {"active_set", s.active_set.bits()},
        {"fallback_used", s.fallback_used},
        {"degraded", s.degraded},
    };
}

RoutingState state_from_json(const nlohmann::json& doc) {
    RoutingState s;
    s.step = doc.at("step").get<int>();
    s.usage_set = ModalitySet{doc.at("usage_set").get<std::uint8_t>()};
    s.reliable_set = ModalitySet{doc.at("reliable_set").get<std::uint8_t>()};
    s.fused_set = ModalitySet{doc.at("fused_set").get<std::uint8_t>()};
    for (auto m : kAllModalities) {
        const auto key = std::string(name_of(m));
        at(s.states, m) = doc.at("states").at(key).get<int>() != 0;
        at(s.weights, m) = doc.at("weights").at(key).get<double>();
        at(s.smoothed, m) = doc.at("smoothed").at(key).get<double>();
    }
    s.active_set = ModalitySet{doc.at("active_set").get<std::uint8_t>()};
    s.fallback_used = doc.at("fallback_used").get<bool>();
    s.degraded = doc.at("degraded").get<bool>();
    return s;
}

}  // namespace pramr
