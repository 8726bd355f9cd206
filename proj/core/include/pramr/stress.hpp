#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pramr/frame.hpp"
#include "pramr/modality.hpp"

namespace pramr {

enum class PerturbationKind { GradualDegradation, AbruptFailure, HighFrequencyNoise };

std::string_view name_of(PerturbationKind kind);

struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::GradualDegradation;
    ModalitySet targets = ModalitySet{0x2};  // lidar by default
    double duration = 20.0;                  // seconds
    double dt = 0.5;                         // tick period, seconds

    // GradualDegradation: linear ramp of the reliability level.
    double start_level = 0.9;
    double end_level = 0.1;

    // AbruptFailure: healthy pre_level until onset_time, then floor_level.
    double onset_time = 5.0;
    double floor_level = 0.05;
    double pre_level = 0.9;

    // HighFrequencyNoise: cosine fluctuation around the carrier. The
    // baseline runs at a quarter of the amplitude (dense plain-threshold
    // crossings, inside the hysteresis band); one seeded full-amplitude
    // burst per minute spans a single period and crosses both bands.
    double carrier = 0.5;
    double amplitude = 0.15;
    int period_ticks = 3;  // >= 2
    std::uint64_t seed = 0;
};

std::optional<std::string> validate_spec(const PerturbationSpec& spec);

nlohmann::json spec_to_json(const PerturbationSpec& spec);
PerturbationSpec spec_from_json(const nlohmann::json& doc);

// Per-tick reliability level curve for the target modality.
std::vector<double> level_curve(const PerturbationSpec& spec);

// Deterministic trace whose rule-based reliability for each target modality
// follows the requested level curve exactly; non-targets hold at 0.9.
std::vector<DiagnosticFrame> generate_trace(const PerturbationSpec& spec);

// Frozen acceptance trace: 60 s at 2 Hz, camera noise amplitude 0.08 period
// 11 ticks, lidar and radar amplitude 0.15 period 3 ticks, carriers at 0.5,
// seed 42.
std::vector<DiagnosticFrame> canonical_table3_trace();

struct FeatureVector {
    Modality modality = Modality::Camera;
    std::vector<double> values;
};

// Component-wise weighted sum; weights are renormalized over the supplied
// features. Throws std::invalid_argument on dimension mismatch.
FeatureVector fuse_features(const std::vector<FeatureVector>& features,
                            const PerModality<double>& weights);

}  // namespace pramr
