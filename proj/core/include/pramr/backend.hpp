#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pramr/decision.hpp"
#include "pramr/frame.hpp"
#include "pramr/memory.hpp"

namespace pramr {

class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scoring function behind the router: maps a diagnostic frame plus the
// latest memory snapshot to a usage mask, reliabilities, and complexity.
class RouterBackend {
public:
    virtual ~RouterBackend() = default;
    virtual RouterDecision score(const DiagnosticFrame& frame,
                                 const MemorySnapshot& context) = 0;
    virtual std::string_view name() const = 0;
};

// --- Rule-based reference backend (frozen oracle) ---------------------------
//
// r_camera = mean(brightness_mean, contrast, edge_density) * (0.5 + 0.5*illumination)
// r_lidar  = mean(point_density, 1 - noise_ratio, reflectivity_ratio)
// r_radar  = mean(target_density, rcs_stability, 1 - detection_probability)
// complexity = mean(map_complexity, weather_severity, 1 - illumination)
// usage: camera always on; radar iff complexity >= 0.3; lidar iff complexity >= 0.6

PerModality<double> rule_based_reliability(const DiagnosticFrame& frame);

struct UsageResult {
    PerModality<bool> usage;
    double scene_complexity;
};
UsageResult rule_based_usage(const DiagnosticFrame& frame);

inline constexpr double kRadarUsageComplexity = 0.3;
inline constexpr double kLidarUsageComplexity = 0.6;

class RuleBasedBackend final : public RouterBackend {
public:
    RouterDecision score(const DiagnosticFrame& frame, const MemorySnapshot& context) override;
    std::string_view name() const override { return "rule"; }
};

// --- Scripted replay backend ------------------------------------------------

class ScriptedBackend final : public RouterBackend {
public:
    explicit ScriptedBackend(std::vector<RouterDecision> decisions);
    static ScriptedBackend from_file(const std::string& path);

    // Throws BackendError once the trace is exhausted.
    RouterDecision score(const DiagnosticFrame& frame, const MemorySnapshot& context) override;
    std::string_view name() const override { return "scripted"; }

private:
    std::vector<RouterDecision> decisions_;
    std::size_t next_ = 0;
};

// --- Remote backend ---------------------------------------------------------

// Builds the request document sent to the remote router. Contains every
// enabled diagnostic and contextual indicator by name, plus a compact
// summary of the memory context and the expected response schema.
nlohmann::json remote_request_body(const DiagnosticFrame& frame, const MemorySnapshot& context);

// Validates the response document and maps it to a RouterDecision.
// Throws BackendError on any schema or range violation.
RouterDecision parse_remote_response(const nlohmann::json& doc);

class RemoteBackend final : public RouterBackend {
public:
    // endpoint: "host:port" or "host:port/path" (default path /route).
    RemoteBackend(std::string endpoint, double timeout_seconds);

    // Throws BackendError on timeout, transport failure, or invalid response.
    RouterDecision score(const DiagnosticFrame& frame, const MemorySnapshot& context) override;
    std::string_view name() const override { return "remote"; }

private:
    std::string host_;
    int port_ = 0;
    std::string path_;
    double timeout_seconds_;
};

}  // namespace pramr
