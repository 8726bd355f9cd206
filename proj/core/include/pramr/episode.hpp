#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pramr/decision.hpp"
#include "pramr/frame.hpp"
#include "pramr/memory.hpp"
#include "pramr/state.hpp"

namespace pramr {

// One record per reactive tick.
struct EpisodeRecord {
    int tick = 0;
    double t = 0.0;
    double memory_tau = 0.0;  // commit time of the snapshot in effect
    int memory_version = 0;
    std::string scene_id;
    DiagnosticFrame frame;
    RouterDecision decision;  // latest decision in effect at this tick
    RoutingState state;       // latest committed routing state
    bool deliberative = false;  // routing ran at this tick
    bool recall_attempted = false;
    bool recall_hit = false;
    DrivingCommand command;
};

struct EpisodeLog {
    std::vector<EpisodeRecord> records;
    std::vector<MemoryEvent> memory_events;
    std::vector<KnowledgeEntry> knowledge;
};

nlohmann::json record_to_json(const EpisodeRecord& record);
EpisodeRecord record_from_json(const nlohmann::json& doc);

// episode.jsonl: one record per line.
void write_episode(const std::string& path, const EpisodeLog& log);
EpisodeLog read_episode(const std::string& path);

// Flattened CSVs behind the weight/state time-series plots.
void write_weights_csv(const std::string& path, const EpisodeLog& log);
void write_states_csv(const std::string& path, const EpisodeLog& log);

}  // namespace pramr
