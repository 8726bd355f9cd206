#include "pramr/stress.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pramr/rng.hpp"

namespace pramr {

std::string_view name_of(PerturbationKind kind) {
    switch (kind) {
        case PerturbationKind::GradualDegradation: return "gradual";
        case PerturbationKind::AbruptFailure: return "abrupt";
        case PerturbationKind::HighFrequencyNoise: return "noise";
    }
    return "?";
}

namespace {

std::optional<PerturbationKind> kind_from_name(std::string_view name) {
    for (auto k : {PerturbationKind::GradualDegradation, PerturbationKind::AbruptFailure,
                   PerturbationKind::HighFrequencyNoise}) {
        if (name == name_of(k)) return k;
    }
    return std::nullopt;
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

// Baseline fluctuation is a quarter of the nominal amplitude: dense plain-
// threshold crossings that stay inside the hysteresis band. Seeded full-
// amplitude bursts (one per minute, spanning one period) cross both bands.
constexpr double kNoiseBaselineScale = 0.25;

std::vector<bool> burst_mask(const PerturbationSpec& spec, int n) {
    std::vector<bool> mask(n, false);
    CounterRng rng(spec.seed);
    int periods = n / spec.period_ticks;
    int bursts = std::max(1, static_cast<int>(spec.duration / 60.0));
    for (int b = 0; b < bursts; ++b) {
        if (periods < 3) break;
        int q = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(periods - 2)));
        for (int k = q * spec.period_ticks; k < (q + 1) * spec.period_ticks && k < n; ++k) {
            mask[k] = true;
        }
    }
    return mask;
}

}  // namespace

std::optional<std::string> validate_spec(const PerturbationSpec& spec) {
    if (!(spec.duration > 0.0)) return "duration";
    if (!(spec.dt > 0.0)) return "dt";
    if (spec.targets.empty()) return "targets";
    switch (spec.kind) {
        case PerturbationKind::GradualDegradation:
            if (!in_unit(spec.start_level)) return "start_level";
            if (!in_unit(spec.end_level)) return "end_level";
            break;
        case PerturbationKind::AbruptFailure:
            if (!(spec.onset_time >= 0.0 && spec.onset_time <= spec.duration)) return "onset_time";
            if (!in_unit(spec.floor_level)) return "floor_level";
            if (!in_unit(spec.pre_level)) return "pre_level";
            break;
        case PerturbationKind::HighFrequencyNoise:
            if (!in_unit(spec.carrier)) return "carrier";
            if (!(spec.amplitude >= 0.0 && spec.amplitude <= 1.0)) return "amplitude";
            if (spec.period_ticks < 2) return "period_ticks";
            break;
    }
    return std::nullopt;
}

nlohmann::json spec_to_json(const PerturbationSpec& spec) {
    return {
        {"kind", std::string(name_of(spec.kind))},
        {"targets", spec.targets.bits()},
        {"duration", spec.duration},
        {"dt", spec.dt},
        {"start_level", spec.start_level},
        {"end_level", spec.end_level},
        {"onset_time", spec.onset_time},
        {"floor_level", spec.floor_level},
        {"pre_level", spec.pre_level},
        {"carrier", spec.carrier},
        {"amplitude", spec.amplitude},
        {"period_ticks", spec.period_ticks},
        {"seed", spec.seed},
    };
}

PerturbationSpec spec_from_json(const nlohmann::json& doc) {
    PerturbationSpec spec;
    auto kind = kind_from_name(doc.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error("unknown perturbation kind");
    spec.kind = *kind;
    spec.targets = ModalitySet{doc.at("targets").get<std::uint8_t>()};
    auto load = [&](const char* key, auto& field) {
        if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
    };
    load("duration", spec.duration);
    load("dt", spec.dt);
    load("start_level", spec.start_level);
    load("end_level", spec.end_level);
    load("onset_time", spec.onset_time);
    load("floor_level", spec.floor_level);
    load("pre_level", spec.pre_level);
    load("carrier", spec.carrier);
    load("amplitude", spec.amplitude);
    load("period_ticks", spec.period_ticks);
    load("seed", spec.seed);
    if (auto bad = validate_spec(spec)) throw std::runtime_error("invalid spec: " + *bad);
    return spec;
}

std::vector<double> level_curve(const PerturbationSpec& spec) {
    if (auto bad = validate_spec(spec)) throw std::invalid_argument("invalid spec: " + *bad);
    int n = static_cast<int>(std::llround(spec.duration / spec.dt));
    std::vector<double> levels(n);
    switch (spec.kind) {
        case PerturbationKind::GradualDegradation:
            for (int k = 0; k < n; ++k) {
                double f = n > 1 ? static_cast<double>(k) / (n - 1) : 0.0;
                levels[k] = spec.start_level + (spec.end_level - spec.start_level) * f;
            }
            break;
        case PerturbationKind::AbruptFailure:
            for (int k = 0; k < n; ++k) {
                levels[k] = k * spec.dt < spec.onset_time ? spec.pre_level : spec.floor_level;
            }
            break;
        case PerturbationKind::HighFrequencyNoise: {
            auto bursts = burst_mask(spec, n);
            for (int k = 0; k < n; ++k) {
                double envelope = bursts[k] ? 1.0 : kNoiseBaselineScale;
                double phase = 2.0 * std::numbers::pi * k / spec.period_ticks;
                levels[k] = spec.carrier + spec.amplitude * envelope * std::cos(phase);
            }
            break;
        }
    }
    for (auto& level : levels) level = std::clamp(level, 0.0, 1.0);
    return levels;
}

namespace {

constexpr double kHealthyLevel = 0.9;

DiagnosticFrame base_frame(double t) {
    DiagnosticFrame f;
    f.timestamp = t;
    // Healthy sensors in a busy scene: complexity 0.6, all usage tiers on.
    f.camera = {kHealthyLevel, kHealthyLevel, kHealthyLevel};
    f.lidar = {kHealthyLevel, 1.0 - kHealthyLevel, kHealthyLevel};
    f.radar = {kHealthyLevel, kHealthyLevel, 1.0 - kHealthyLevel};
    f.external = {0.8, 1.0};
    f.map_complexity = 1.0;
    return f;
}

// Pins the rule-based reliability of one modality to the given level.
// Illumination is held at 1 so the camera scaling factor is exactly 1.
void apply_level(DiagnosticFrame& f, Modality m, double level) {
    switch (m) {
        case Modality::Camera:
            f.camera = {level, level, level};
            break;
        case Modality::Lidar:
            f.lidar = {level, 1.0 - level, level};
            break;
        case Modality::Radar:
            f.radar = {level, level, 1.0 - level};
            break;
    }
}

}  // namespace

std::vector<DiagnosticFrame> generate_trace(const PerturbationSpec& spec) {
    auto levels = level_curve(spec);
    std::vector<DiagnosticFrame> trace(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) {
        trace[k] = base_frame(k * spec.dt);
        for (auto m : kAllModalities) {
            if (spec.targets.contains(m)) apply_level(trace[k], m, levels[k]);
        }
    }
    return trace;
}

std::vector<DiagnosticFrame> canonical_table3_trace() {
    PerModality<PerturbationSpec> specs;
    for (auto m : kAllModalities) {
        PerturbationSpec spec;
        spec.kind = PerturbationKind::HighFrequencyNoise;
        spec.targets = ModalitySet{};
        spec.targets.insert(m);
        spec.duration = 60.0;
        spec.dt = 0.5;
        spec.carrier = 0.5;
        spec.amplitude = m == Modality::Camera ? 0.08 : 0.15;
        spec.period_ticks = m == Modality::Camera ? 11 : 3;
        spec.seed = 42 + static_cast<std::uint64_t>(index_of(m));
        at(specs, m) = spec;
    }
    PerModality<std::vector<double>> curves;
    for (auto m : kAllModalities) at(curves, m) = level_curve(at(specs, m));

    std::vector<DiagnosticFrame> trace(at(curves, Modality::Camera).size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
        trace[k] = base_frame(k * 0.5);
        for (auto m : kAllModalities) apply_level(trace[k], m, at(curves, m)[k]);
    }
    return trace;
}

FeatureVector fuse_features(const std::vector<FeatureVector>& features,
                            const PerModality<double>& weights) {
    if (features.empty()) throw std::invalid_argument("no features to fuse");
    std::size_t dim = features.front().values.size();
    double sum = 0.0;
    for (const auto& f : features) {
        if (f.values.size() != dim) throw std::invalid_argument("feature dimension mismatch");
        sum += at(weights, f.modality);
    }
    if (sum <= 0.0) throw std::invalid_argument("fusion weights sum to zero");
    FeatureVector fused;
    fused.modality = features.front().modality;
    fused.values.assign(dim, 0.0);
    for (const auto& f : features) {
        double w = at(weights, f.modality) / sum;
        for (std::size_t i = 0; i < dim; ++i) fused.values[i] += w * f.values[i];
    }
    return fused;
}

}  // namespace pramr
