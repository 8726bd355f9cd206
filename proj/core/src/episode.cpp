#include "pramr/episode.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "jsonl.hpp"
#include "pramr/state.hpp"

namespace pramr {

nlohmann::json record_to_json(const EpisodeRecord& r) {
    return {
        {"tick", r.tick},
        {"t", r.t},
        {"memory_tau", r.memory_tau},
        {"memory_version", r.memory_version},
        {"scene_id", r.scene_id},
        {"frame", frame_to_json(r.frame)},
        {"decision", decision_to_json(r.decision)},
        {"state", state_to_json(r.state)},
        {"deliberative", r.deliberative},
        {"recall_attempted", r.recall_attempted},
        {"recall_hit", r.recall_hit},
        {"command", {{"tick", r.command.tick}, {"active_set", r.command.active_set.bits()}}},
    };
}

EpisodeRecord record_from_json(const nlohmann::json& doc) {
    EpisodeRecord r;
    r.tick = doc.at("tick").get<int>();
    r.t = doc.at("t").get<double>();
    r.memory_tau = doc.at("memory_tau").get<double>();
    r.memory_version = doc.at("memory_version").get<int>();
    r.scene_id = doc.at("scene_id").get<std::string>();
    r.frame = frame_from_json(doc.at("frame"));
    r.decision = decision_from_json(doc.at("decision"));
    r.state = state_from_json(doc.at("state"));
    r.deliberative = doc.at("deliberative").get<bool>();
    r.recall_attempted = doc.at("recall_attempted").get<bool>();
    r.recall_hit = doc.at("recall_hit").get<bool>();
    r.command.tick = doc.at("command").at("tick").get<int>();
    r.command.active_set = ModalitySet{doc.at("command").at("active_set").get<std::uint8_t>()};
    return r;
}

void write_episode(const std::string& path, const EpisodeLog& log) {
    detail::write_jsonl(path, [&](std::size_t i, nlohmann::json& doc) {
        if (i >= log.records.size()) return false;
        doc = record_to_json(log.records[i]);
        return true;
    });
}

EpisodeLog read_episode(const std::string& path) {
    EpisodeLog log;
    detail::read_jsonl(path, [&](const nlohmann::json& doc) {
        log.records.push_back(record_from_json(doc));
    });
    return log;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

void write_weights_csv(const std::string& path, const EpisodeLog& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "t";
    for (auto m : kAllModalities) out << ",w_" << name_of(m);
    for (auto m : kAllModalities) out << ",ws_" << name_of(m);
    out << "\n";
    for (const auto& r : log.records) {
        out << fmt(r.t);
        for (auto m : kAllModalities) out << ',' << fmt(at(r.state.weights, m));
        for (auto m : kAllModalities) out << ',' << fmt(at(r.state.smoothed, m));
        out << "\n";
    }
}

void write_states_csv(const std::string& path, const EpisodeLog& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "t,tau";
    for (auto m : kAllModalities) out << ",s_" << name_of(m);
    out << ",active_mask,recall_hit,fallback,degraded\n";
    for (const auto& r : log.records) {
        out << fmt(r.t) << ',' << fmt(r.memory_tau);
        for (auto m : kAllModalities) out << ',' << (at(r.state.states, m) ? 1 : 0);
        out << ',' << static_cast<int>(r.state.active_set.bits()) << ',' << (r.recall_hit ? 1 : 0)
            << ',' << (r.state.fallback_used ? 1 : 0) << ',' << (r.state.degraded ? 1 : 0)
            << "\n";
    }
}

}  // namespace pramr
