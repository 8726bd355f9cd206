#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pramr/modality.hpp"

namespace pramr {

// One timestep of per-modality diagnostic indicators plus scene context.
// All indicators are pre-normalized to [0,1] at ingestion.
struct DiagnosticFrame {
    double timestamp = 0.0;

    struct Camera {
        double brightness_mean = 0.0;
        double contrast = 0.0;
        double edge_density = 0.0;
        bool operator==(const Camera&) const = default;
    } camera;

    struct Lidar {
        double point_density = 0.0;
        double noise_ratio = 0.0;
        double reflectivity_ratio = 0.0;
        bool operator==(const Lidar&) const = default;
    } lidar;

    struct Radar {
        double target_density = 0.0;
        double rcs_stability = 0.0;
        double detection_probability = 0.0;
        bool operator==(const Radar&) const = default;
    } radar;

    struct External {
        double weather_severity = 0.0;
        double illumination = 0.0;
        bool operator==(const External&) const = default;
    } external;

    double map_complexity = 0.0;

    bool operator==(const DiagnosticFrame&) const = default;
};

// Returns the first violated field name, or nullopt when the frame is valid.
std::optional<std::string> validate_frame(const DiagnosticFrame& frame);

// Trace-level check: every frame valid and timestamps strictly increasing.
std::optional<std::string> validate_trace(const std::vector<DiagnosticFrame>& trace);

nlohmann::json frame_to_json(const DiagnosticFrame& frame);
DiagnosticFrame frame_from_json(const nlohmann::json& doc);

// Line-delimited JSON trace file, one frame per line.
void write_trace(const std::string& path, const std::vector<DiagnosticFrame>& trace);
std::vector<DiagnosticFrame> read_trace(const std::string& path);

}  // namespace pramr
