#pragma once

#include <vector>

#include "pramr/backend.hpp"
#include "pramr/config.hpp"
#include "pramr/episode.hpp"

namespace pramr {

struct LoopSchedule {
    double fast_period = 0.5;
    double slow_period = 1.0;  // integer multiple of fast_period
    bool simulated_time = true;
    // Simulated deliberative latency: a commit scheduled at slow tick T
    // becomes visible to the reactive loop at T + latency.
    double deliberative_latency = 0.0;
    // Scene boundaries (timestamps at which SceneEnd fires). The episode end
    // always closes the final scene.
    std::vector<double> scene_ends;
};

struct EpisodeOptions {
    bool use_memory = true;
    bool consolidate = true;
};

// Asynchronous dual-loop run over a trace sampled at the fast cadence.
// The reactive loop emits one record per fast tick from the latest committed
// routing state; the deliberative loop aggregates the history window and
// runs the routing engine at the slow cadence.
EpisodeLog run_episode(const std::vector<DiagnosticFrame>& trace, RouterBackend& backend,
                       const RoutingConfig& config, const LoopSchedule& schedule,
                       const EpisodeOptions& options = {});

// Ablation baseline: routing executed synchronously at every tick.
EpisodeLog single_loop_episode(const std::vector<DiagnosticFrame>& trace, RouterBackend& backend,
                               const RoutingConfig& config, const EpisodeOptions& options = {});

}  // namespace pramr
