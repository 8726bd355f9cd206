#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pramr/modality.hpp"

namespace pramr {

enum class DecisionSource { RuleBased, Scripted, Remote, MemoryRecall };

std::string_view name_of(DecisionSource source);
std::optional<DecisionSource> decision_source_from_name(std::string_view name);

// Backend output: usage mask, per-modality reliability, scene complexity.
struct RouterDecision {
    PerModality<bool> usage = {false, false, false};
    PerModality<double> reliability = {0.0, 0.0, 0.0};
    double scene_complexity = 0.0;
    DecisionSource source = DecisionSource::RuleBased;

    bool operator==(const RouterDecision&) const = default;
};

std::optional<std::string> validate_decision(const RouterDecision& decision);

nlohmann::json decision_to_json(const RouterDecision& decision);
RouterDecision decision_from_json(const nlohmann::json& doc);

// Line-delimited JSON decision trace (scripted backend input).
void write_decisions(const std::string& path, const std::vector<RouterDecision>& decisions);
std::vector<RouterDecision> read_decisions(const std::string& path);

}  // namespace pramr
