#include <chrono>
#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pramr/backend.hpp"

namespace pramr {

nlohmann::json remote_request_body(const DiagnosticFrame& frame, const MemorySnapshot& context) {
    nlohmann::json body = {
        {"task", "modality_routing"},
        {"indicators", frame_to_json(frame)},
        {"memory",
         {{"version", context.version},
          {"committed_at", context.committed_at}}},
        {"response_schema",
         {{"reliability", {{"camera", "[0,1]"}, {"lidar", "[0,1]"}, {"radar", "[0,1]"}}},
          {"scene_complexity", "[0,1]"},
          {"usage", {{"camera", "0|1"}, {"lidar", "0|1"}, {"radar", "0|1"}}}}},
    };
    if (context.has(ComponentKind::PRoutingContext)) {
        body["memory"]["routing_context"] = context.live.at(ComponentKind::PRoutingContext).payload;
    }
    return body;
}

RouterDecision parse_remote_response(const nlohmann::json& doc) {
    for (const char* group : {"reliability", "scene_complexity", "usage"}) {
        if (!doc.contains(group)) {
            throw BackendError(std::string("remote response missing field: ") + group);
        }
    }
    RouterDecision d;
    for (auto m : kAllModalities) {
        const auto key = std::string(name_of(m));
        if (!doc.at("reliability").contains(key)) {
            throw BackendError("remote response missing reliability." + key);
        }
        if (!doc.at("usage").contains(key)) {
            throw BackendError("remote response missing usage." + key);
        }
        double r = doc.at("reliability").at(key).get<double>();
        if (!(r >= 0.0 && r <= 1.0)) {
            throw BackendError("remote reliability." + key + " out of range");
        }
        int u = doc.at("usage").at(key).get<int>();
        if (u != 0 && u != 1) {
            throw BackendError("remote usage." + key + " not a binary indicator");
        }
        at(d.reliability, m) = r;
        at(d.usage, m) = u != 0;
    }
    double c = doc.at("scene_complexity").get<double>();
    if (!(c >= 0.0 && c <= 1.0)) throw BackendError("remote scene_complexity out of range");
    d.scene_complexity = c;
    d.source = DecisionSource::Remote;
    return d;
}

RemoteBackend::RemoteBackend(std::string endpoint, double timeout_seconds)
    : timeout_seconds_(timeout_seconds) {
    if (!(timeout_seconds > 0.0)) {
        throw std::invalid_argument("remote timeout must be positive");
    }
    // Strip an optional scheme, then split host:port[/path].
    if (auto pos = endpoint.find("://"); pos != std::string::npos) {
        endpoint = endpoint.substr(pos + 3);
    }
    auto slash = endpoint.find('/');
    path_ = slash == std::string::npos ? "/route" : endpoint.substr(slash);
    std::string hostport = endpoint.substr(0, slash);
    auto colon = hostport.rfind(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("remote endpoint must be host:port[/path]");
    }
    host_ = hostport.substr(0, colon);
    port_ = std::stoi(hostport.substr(colon + 1));
}

RouterDecision RemoteBackend::score(const DiagnosticFrame& frame, const MemorySnapshot& context) {
    httplib::Client client(host_, port_);
    auto timeout = std::chrono::milliseconds(
        static_cast<long long>(std::ceil(timeout_seconds_ * 1000.0)));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    auto body = remote_request_body(frame, context).dump();
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
        throw BackendError("remote endpoint unreachable or timed out: " + host_ + ":" +
                           std::to_string(port_));
    }
    if (res->status != 200) {
        throw BackendError("remote endpoint returned status " + std::to_string(res->status));
    }
    nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) {
        throw BackendError("remote response is not valid JSON");
    }
    return parse_remote_response(doc);
}

}  // namespace pramr
