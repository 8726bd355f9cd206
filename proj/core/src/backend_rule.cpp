#include <algorithm>

#include "pramr/backend.hpp"

namespace pramr {

namespace {

double mean3(double a, double b, double c) { return (a + b + c) / 3.0; }

}  // namespace

PerModality<double> rule_based_reliability(const DiagnosticFrame& f) {
    PerModality<double> r;
    // Camera quality tracks brightness/contrast/texture, scaled down under
    // poor global illumination.
    double illumination_factor = 0.5 + 0.5 * f.external.illumination;
    at(r, Modality::Camera) =
        mean3(f.camera.brightness_mean, f.camera.contrast, f.camera.edge_density) *
        illumination_factor;
    // High noise ratio means low signal quality, so it enters inverted.
    at(r, Modality::Lidar) =
        mean3(f.lidar.point_density, 1.0 - f.lidar.noise_ratio, f.lidar.reflectivity_ratio);
    // Radar detection-probability inversion: high probability, low reliability.
    at(r, Modality::Radar) =
        mean3(f.radar.target_density, f.radar.rcs_stability, 1.0 - f.radar.detection_probability);
    for (auto& v : r) v = std::clamp(v, 0.0, 1.0);
    return r;
}

UsageResult rule_based_usage(const DiagnosticFrame& f) {
    UsageResult result;
    result.scene_complexity =
        mean3(f.map_complexity, f.external.weather_severity, 1.0 - f.external.illumination);
    // Two-tier activation: camera always on, radar joins in medium-complex
    // scenes, lidar only under high complexity.
    at(result.usage, Modality::Camera) = true;
    at(result.usage, Modality::Radar) = result.scene_complexity >= kRadarUsageComplexity;
    at(result.usage, Modality::Lidar) = result.scene_complexity >= kLidarUsageComplexity;
    return result;
}

RouterDecision RuleBasedBackend::score(const DiagnosticFrame& frame,
                                       const MemorySnapshot& /*context*/) {
    RouterDecision d;
    d.reliability = rule_based_reliability(frame);
    auto usage = rule_based_usage(frame);
    d.usage = usage.usage;
    d.scene_complexity = usage.scene_complexity;
    d.source = DecisionSource::RuleBased;
    return d;
}

ScriptedBackend::ScriptedBackend(std::vector<RouterDecision> decisions)
    : decisions_(std::move(decisions)) {}

ScriptedBackend ScriptedBackend::from_file(const std::string& path) {
    return ScriptedBackend(read_decisions(path));
}

RouterDecision ScriptedBackend::score(const DiagnosticFrame& /*frame*/,
                                      const MemorySnapshot& /*context*/) {
    if (next_ >= decisions_.size()) {
        throw BackendError("scripted decision trace exhausted at index " +
                           std::to_string(next_));
    }
    RouterDecision d = decisions_[next_++];
    d.source = DecisionSource::Scripted;
    return d;
}

}  // namespace pramr
