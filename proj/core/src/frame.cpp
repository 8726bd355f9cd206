#include "pramr/frame.hpp"

#include <nlohmann/json.hpp>

#include "jsonl.hpp"

namespace pramr {

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

std::optional<std::string> validate_frame(const DiagnosticFrame& f) {
    if (!(f.timestamp >= 0.0)) return "timestamp";
    struct Field {
        const char* name;
        double value;
    };
    const Field fields[] = {
        {"camera.brightness_mean", f.camera.brightness_mean},
        {"camera.contrast", f.camera.contrast},
        {"camera.edge_density", f.camera.edge_density},
        {"lidar.point_density", f.lidar.point_density},
        {"lidar.noise_ratio", f.lidar.noise_ratio},
        {"lidar.reflectivity_ratio", f.lidar.reflectivity_ratio},
        {"radar.target_density", f.radar.target_density},
        {"radar.rcs_stability", f.radar.rcs_stability},
        {"radar.detection_probability", f.radar.detection_probability},
        {"external.weather_severity", f.external.weather_severity},
        {"external.illumination", f.external.illumination},
        {"map_complexity", f.map_complexity},
    };
    for (const auto& field : fields) {
        if (!in_unit(field.value)) return field.name;
    }
    return std::nullopt;
}

std::optional<std::string> validate_trace(const std::vector<DiagnosticFrame>& trace) {
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (auto bad = validate_frame(trace[i])) {
            return "frame " + std::to_string(i) + ": " + *bad;
        }
        if (i > 0 && !(trace[i].timestamp > trace[i - 1].timestamp)) {
            return "frame " + std::to_string(i) + ": timestamp not strictly increasing";
        }
    }
    return std::nullopt;
}

nlohmann::json frame_to_json(const DiagnosticFrame& f) {
    return {
        {"timestamp", f.timestamp},
        {"camera",
         {{"brightness_mean", f.camera.brightness_mean},
          {"contrast", f.camera.contrast},
          {"edge_density", f.camera.edge_density}}},
        {"lidar",
         {{"point_density", f.lidar.point_density},
          {"noise_ratio", f.lidar.noise_ratio},
          {"reflectivity_ratio", f.lidar.reflectivity_ratio}}},
        {"radar",
         {{"target_density", f.radar.target_density},
          {"rcs_stability", f.radar.rcs_stability},
          {"detection_probability", f.radar.detection_probability}}},
        {"external",
         {{"weather_severity", f.external.weather_severity},
          {"illumination", f.external.illumination}}},
        {"map_complexity", f.map_complexity},
    };
}

DiagnosticFrame frame_from_json(const nlohmann::json& doc) {
    DiagnosticFrame f;
    f.timestamp = doc.at("timestamp").get<double>();
    const auto& cam = doc.at("camera");
    f.camera.brightness_mean = cam.at("brightness_mean").get<double>();
    f.camera.contrast = cam.at("contrast").get<double>();
    f.camera.edge_density = cam.at("edge_density").get<double>();
    const auto& lid = doc.at("lidar");
    f.lidar.point_density = lid.at("point_density").get<double>();
    f.lidar.noise_ratio = lid.at("noise_ratio").get<double>();
    f.lidar.reflectivity_ratio = lid.at("reflectivity_ratio").get<double>();
    const auto& rad = doc.at("radar");
    f.radar.target_density = rad.at("target_density").get<double>();
    f.radar.rcs_stability = rad.at("rcs_stability").get<double>();
    f.radar.detection_probability = rad.at("detection_probability").get<double>();
    const auto& ext = doc.at("external");
    f.external.weather_severity = ext.at("weather_severity").get<double>();
    f.external.illumination = ext.at("illumination").get<double>();
    f.map_complexity = doc.at("map_complexity").get<double>();
    return f;
}

void write_trace(const std::string& path, const std::vector<DiagnosticFrame>& trace) {
    detail::write_jsonl(path, [&](std::size_t i, nlohmann::json& doc) {
        if (i >= trace.size()) return false;
        doc = frame_to_json(trace[i]);
        return true;
    });
}

std::vector<DiagnosticFrame> read_trace(const std::string& path) {
    std::vector<DiagnosticFrame> trace;
    detail::read_jsonl(path, [&](const nlohmann::json& doc) {
        trace.push_back(frame_from_json(doc));
    });
    return trace;
}

}  // namespace pramr
