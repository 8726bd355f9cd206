#include "pramr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pramr/engine.hpp"

namespace pramr {

namespace {

// Per-tick RSI over the active set's smoothed weights. Returns nullopt for
// the zero-mean degenerate case.
std::optional<double> tick_rsi(const RoutingState& state) {
    int n = state.active_set.size();
    if (n == 0) return std::nullopt;
    if (n == 1) return 1.0;
    double sum = 0.0;
    for (auto m : kAllModalities) {
        if (state.active_set.contains(m)) sum += at(state.smoothed, m);
    }
    double mean = sum / n;
    if (mean <= 0.0) return std::nullopt;
    double var = 0.0;
    for (auto m : kAllModalities) {
        if (!state.active_set.contains(m)) continue;
        double d = at(state.smoothed, m) - mean;
        var += d * d;
    }
    var /= n;  // population variance
    return 1.0 - std::sqrt(var) / mean;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

double routing_efficiency(const EpisodeLog& log) {
    if (log.records.empty()) throw std::invalid_argument("empty episode log");
    double total = 0.0;
    for (const auto& r : log.records) {
        total += static_cast<double>(kModalityCount - r.state.active_set.size()) / kModalityCount;
    }
    return total / log.records.size();
}

double jaccard(ModalitySet a, ModalitySet b) {
    int uni = (a | b).size();
    if (uni == 0) return 1.0;  // two empty masks are maximally consistent
    return static_cast<double>((a & b).size()) / uni;
}

double routing_consistency(const EpisodeLog& log) {
    if (log.records.size() < 2) throw std::invalid_argument("need at least 2 ticks");
    double total = 0.0;
    for (std::size_t i = 1; i < log.records.size(); ++i) {
        total += jaccard(log.records[i - 1].state.active_set, log.records[i].state.active_set);
    }
    return total / (log.records.size() - 1);
}

double stability_index(const EpisodeLog& log, int* skipped) {
    if (log.records.empty()) throw std::invalid_argument("empty episode log");
    double total = 0.0;
    int counted = 0, skip = 0;
    for (const auto& r : log.records) {
        if (auto rsi = tick_rsi(r.state)) {
            total += *rsi;
            ++counted;
        } else {
            ++skip;
        }
    }
    if (skipped) *skipped = skip;
    return counted > 0 ? total / counted : 0.0;
}

std::pair<double, std::vector<RollingPoint>> memory_recall_rate(const EpisodeLog& log,
                                                                double window) {
    long hits = 0, attempts = 0;
    std::vector<RollingPoint> rolling;
    struct Attempt {
        double t;
        bool hit;
    };
    std::vector<Attempt> series;
    for (const auto& r : log.records) {
        if (!r.recall_attempted) continue;
        ++attempts;
        hits += r.recall_hit ? 1 : 0;
        series.push_back({r.t, r.recall_hit});
    }
    std::size_t lo = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        while (series[i].t - series[lo].t > window) ++lo;
        long wh = 0;
        for (std::size_t j = lo; j <= i; ++j) wh += series[j].hit ? 1 : 0;
        rolling.push_back({series[i].t, static_cast<double>(wh) / (i - lo + 1)});
    }
    double cumulative = attempts > 0 ? static_cast<double>(hits) / attempts : 0.0;
    return {cumulative, rolling};
}

int count_switches(const std::vector<bool>& series) {
    int n = 0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i] != series[i - 1]) ++n;
    }
    return n;
}

SwitchCounts switch_comparison(const EpisodeLog& log, const PerModality<double>& thresholds,
                               double delta) {
    SwitchCounts counts;
    if (log.records.empty()) return counts;
    HysteresisBand band = make_band(thresholds, delta);
    PerModality<std::vector<bool>> thr_series, hyst_series;
    PerModality<bool> hyst =
        threshold_step(log.records.front().decision.reliability, thresholds);
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        const auto& reliability = log.records[i].decision.reliability;
        PerModality<bool> thr = threshold_step(reliability, thresholds);
        if (i > 0) hyst = hysteresis_step(hyst, reliability, band);
        for (auto m : kAllModalities) {
            at(thr_series, m).push_back(at(thr, m));
            at(hyst_series, m).push_back(at(hyst, m));
        }
    }
    for (auto m : kAllModalities) {
        at(counts.threshold, m) = count_switches(at(thr_series, m));
        at(counts.hysteresis, m) = count_switches(at(hyst_series, m));
        counts.threshold_total += at(counts.threshold, m);
        counts.hysteresis_total += at(counts.hysteresis, m);
    }
    if (counts.threshold_total > 0) {
        counts.reduction_percent =
            100.0 * (1.0 - static_cast<double>(counts.hysteresis_total) / counts.threshold_total);
    }
    return counts;
}

std::pair<double, double> displacement_errors(const std::vector<Point2>& pred,
                                              const std::vector<Point2>& gt) {
    if (pred.empty() || gt.empty()) throw std::invalid_argument("empty trajectory");
    if (pred.size() != gt.size()) throw std::invalid_argument("trajectory length mismatch");
    double total = 0.0, last = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        last = std::hypot(pred[i].x - gt[i].x, pred[i].y - gt[i].y);
        total += last;
    }
    return {total / pred.size(), last};
}

MetricsReport compute_report(const EpisodeLog& log, const PerModality<double>& thresholds,
                             double delta, double rolling_window) {
    MetricsReport report;
    report.re = routing_efficiency(log);
    report.rc = log.records.size() >= 2 ? routing_consistency(log) : 1.0;
    report.rsi = stability_index(log, &report.skipped_rsi_ticks);
    auto [cumulative, rolling] = memory_recall_rate(log, rolling_window);
    report.mrr_cumulative = cumulative;
    report.mrr_rolling = std::move(rolling);
    report.zero_attempts =
        std::none_of(log.records.begin(), log.records.end(),
                     [](const EpisodeRecord& r) { return r.recall_attempted; });
    report.switches = switch_comparison(log, thresholds, delta);
    return report;
}

nlohmann::json report_to_json(const MetricsReport& report) {
    nlohmann::json thr, hyst, rolling = nlohmann::json::array();
    for (auto m : kAllModalities) {
        thr[std::string(name_of(m))] = at(report.switches.threshold, m);
        hyst[std::string(name_of(m))] = at(report.switches.hysteresis, m);
    }
    for (const auto& p : report.mrr_rolling) rolling.push_back({{"t", p.t}, {"mrr", p.mrr}});
    nlohmann::json doc = {
        {"re", report.re},
        {"rc", report.rc},
        {"rsi", report.rsi},
        {"mrr_cumulative", report.mrr_cumulative},
        {"mrr_rolling", rolling},
        {"switches",
         {{"threshold", thr},
          {"hysteresis", hyst},
          {"threshold_total", report.switches.threshold_total},
          {"hysteresis_total", report.switches.hysteresis_total},
          {"reduction_percent", report.switches.reduction_percent}}},
        {"zero_attempts", report.zero_attempts},
        {"skipped_rsi_ticks", report.skipped_rsi_ticks},
    };
    if (report.ade) doc["ade"] = *report.ade;
    if (report.fde) doc["fde"] = *report.fde;
    return doc;
}

MetricsReport report_from_json(const nlohmann::json& doc) {
    MetricsReport report;
    report.re = doc.at("re").get<double>();
    report.rc = doc.at("rc").get<double>();
    report.rsi = doc.at("rsi").get<double>();
    report.mrr_cumulative = doc.at("mrr_cumulative").get<double>();
    for (const auto& p : doc.at("mrr_rolling")) {
        report.mrr_rolling.push_back({p.at("t").get<double>(), p.at("mrr").get<double>()});
    }
    const auto& sw = doc.at("switches");
    for (auto m : kAllModalities) {
        at(report.switches.threshold, m) = sw.at("threshold").at(std::string(name_of(m))).get<int>();
        at(report.switches.hysteresis, m) =
            sw.at("hysteresis").at(std::string(name_of(m))).get<int>();
    }
    report.switches.threshold_total = sw.at("threshold_total").get<int>();
    report.switches.hysteresis_total = sw.at("hysteresis_total").get<int>();
    report.switches.reduction_percent = sw.at("reduction_percent").get<double>();
    report.zero_attempts = doc.at("zero_attempts").get<bool>();
    report.skipped_rsi_ticks = doc.at("skipped_rsi_ticks").get<int>();
    if (doc.contains("ade")) report.ade = doc.at("ade").get<double>();
    if (doc.contains("fde")) report.fde = doc.at("fde").get<double>();
    return report;
}

void write_report(const std::string& path, const MetricsReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << report_to_json(report).dump(2) << "\n";
}

void write_report_csv(const std::string& path, const MetricsReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "metric,value\n";
    out << "re," << fmt(report.re) << "\n";
    out << "rc," << fmt(report.rc) << "\n";
    out << "rsi," << fmt(report.rsi) << "\n";
    out << "mrr_cumulative," << fmt(report.mrr_cumulative) << "\n";
    out << "switches_threshold_total," << report.switches.threshold_total << "\n";
    out << "switches_hysteresis_total," << report.switches.hysteresis_total << "\n";
    out << "reduction_percent," << fmt(report.switches.reduction_percent) << "\n";
    if (report.ade) out << "ade," << fmt(*report.ade) << "\n";
    if (report.fde) out << "fde," << fmt(*report.fde) << "\n";
}

std::vector<KnowledgeEntry> consolidate(const EpisodeLog& episode, double quality_threshold) {
    std::vector<KnowledgeEntry> entries;
    // Preserve scene order of first appearance.
    std::vector<std::string> order;
    std::map<std::string, std::vector<const EpisodeRecord*>> scenes;
    for (const auto& r : episode.records) {
        auto [it, inserted] = scenes.try_emplace(r.scene_id);
        if (inserted) order.push_back(r.scene_id);
        it->second.push_back(&r);
    }
    for (const auto& scene : order) {
        const auto& records = scenes[scene];
        double rsi_sum = 0.0;
        int rsi_count = 0;
        double complexity_sum = 0.0;
        std::map<std::uint8_t, int> active_histogram;
        for (const auto* r : records) {
            if (auto rsi = tick_rsi(r->state)) {
                rsi_sum += *rsi;
                ++rsi_count;
            }
            complexity_sum += r->decision.scene_complexity;
            ++active_histogram[r->state.active_set.bits()];
        }
        double mean_rsi = rsi_count > 0 ? rsi_sum / rsi_count : 0.0;
        if (mean_rsi < quality_threshold) continue;
        KnowledgeEntry entry;
        entry.scene_id = scene;
        entry.mean_complexity = complexity_sum / records.size();
        std::uint8_t dominant = 0;
        int best = -1;
        for (const auto& [bits, count] : active_histogram) {
            if (count > best) {
                best = count;
                dominant = bits;
            }
        }
        entry.active_set = ModalitySet{dominant};
        entry.final_weights = records.back()->state.smoothed;
        entry.rsi = mean_rsi;
        entry.created_at = records.back()->t;
        entries.push_back(std::move(entry));
    }
    return entries;
}

}  // namespace pramr
