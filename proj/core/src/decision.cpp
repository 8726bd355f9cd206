#include "pramr/decision.hpp"

#include <nlohmann/json.hpp>

#include "jsonl.hpp"

namespace pramr {

std::string_view name_of(DecisionSource source) {
    switch (source) {
        case DecisionSource::RuleBased: return "rule_based";
        case DecisionSource::Scripted: return "scripted";
        case DecisionSource::Remote: return "remote";
        case DecisionSource::MemoryRecall: return "memory_recall";
    }
    return "?";
}

std::optional<DecisionSource> decision_source_from_name(std::string_view name) {
    for (auto s : {DecisionSource::RuleBased, DecisionSource::Scripted, DecisionSource::Remote,
                   DecisionSource::MemoryRecall}) {
        if (name == name_of(s)) return s;
    }
    return std::nullopt;
}

std::optional<std::string> validate_decision(const RouterDecision& d) {
    for (auto m : kAllModalities) {
        double r = at(d.reliability, m);
        if (!(r >= 0.0 && r <= 1.0)) {
            return std::string("reliability.") + std::string(name_of(m));
        }
    }
    if (!(d.scene_complexity >= 0.0 && d.scene_complexity <= 1.0)) return "scene_complexity";
    return std::nullopt;
}

nlohmann::json decision_to_json(const RouterDecision& d) {
    nlohmann::json usage, reliability;
    for (auto m : kAllModalities) {
        usage[std::string(name_of(m))] = at(d.usage, m) ? 1 : 0;
        reliability[std::string(name_of(m))] = at(d.reliability, m);
    }
    return {
        {"usage", usage},
        {"reliability", reliability},
        {"scene_complexity", d.scene_complexity},
        {"source", std::string(name_of(d.source))},
    };
}

RouterDecision decision_from_json(const nlohmann::json& doc) {
    RouterDecision d;
    for (auto m : kAllModalities) {
        const auto key = std::string(name_of(m));
        at(d.usage, m) = doc.at("usage").at(key).get<int>() != 0;
        at(d.reliability, m) = doc.at("reliability").at(key).get<double>();
    }
    d.scene_complexity = doc.at("scene_complexity").get<double>();
    if (doc.contains("source")) {
        if (auto s = decision_source_from_name(doc.at("source").get<std::string>())) {
            d.source = *s;
        }
    }
    if (auto bad = validate_decision(d)) {
        throw std::runtime_error("invalid decision: " + *bad);
    }
    return d;
}

void write_decisions(const std::string& path, const std::vector<RouterDecision>& decisions) {
    detail::write_jsonl(path, [&](std::size_t i, nlohmann::json& doc) {
        if (i >= decisions.size()) return false;
        doc = decision_to_json(decisions[i]);
        return true;
    });
}

std::vector<RouterDecision> read_decisions(const std::string& path) {
    std::vector<RouterDecision> out;
    detail::read_jsonl(path, [&](const nlohmann::json& doc) {
        out.push_back(decision_from_json(doc));
    });
    return out;
}

}  // namespace pramr
