#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pramr/episode.hpp"
#include "pramr/modality.hpp"

namespace pramr {

struct SwitchCounts {
    PerModality<int> threshold = {0, 0, 0};
    PerModality<int> hysteresis = {0, 0, 0};
    int threshold_total = 0;
    int hysteresis_total = 0;
    double reduction_percent = 0.0;  // 100 * (1 - hyst/thr), 0 when thr == 0
};

struct RollingPoint {
    double t = 0.0;
    double mrr = 0.0;
};

struct MetricsReport {
    double re = 0.0;
    double rc = 0.0;
    double rsi = 0.0;
    double mrr_cumulative = 0.0;
    std::vector<RollingPoint> mrr_rolling;
    SwitchCounts switches;
    std::optional<double> ade;
    std::optional<double> fde;
    bool zero_attempts = false;
    int skipped_rsi_ticks = 0;
};

// Mean over ticks of |deactivated| / N using the gated active sets.
double routing_efficiency(const EpisodeLog& log);

// Mean temporal Jaccard similarity of consecutive active sets; J(0,0) = 1.
double routing_consistency(const EpisodeLog& log);

double jaccard(ModalitySet a, ModalitySet b);

// Per-tick 1 - popstd/mean over smoothed weights of the active set
// (single-modality ticks contribute 1), averaged over the episode.
// Zero-mean ticks are skipped and counted.
double stability_index(const EpisodeLog& log, int* skipped = nullptr);

// Cumulative hits/attempts plus the trailing-window rolling series.
std::pair<double, std::vector<RollingPoint>> memory_recall_rate(const EpisodeLog& log,
                                                                double window = 5.0);

// Transitions s^t != s^{t-1} in a binary series.
int count_switches(const std::vector<bool>& series);

// Threshold-only vs hysteresis comparison over the episode's per-tick
// reliabilities.
SwitchCounts switch_comparison(const EpisodeLog& log, const PerModality<double>& thresholds,
                               double delta);

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// ADE = mean pointwise Euclidean distance, FDE = final-point distance.
// Throws std::invalid_argument on empty or mismatched inputs.
std::pair<double, double> displacement_errors(const std::vector<Point2>& pred,
                                              const std::vector<Point2>& gt);

MetricsReport compute_report(const EpisodeLog& log, const PerModality<double>& thresholds,
                             double delta, double rolling_window = 5.0);

nlohmann::json report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& doc);

void write_report(const std::string& path, const MetricsReport& report);
void write_report_csv(const std::string& path, const MetricsReport& report);

}  // namespace pramr
