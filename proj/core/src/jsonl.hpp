#pragma once

#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace pramr::detail {

inline void write_jsonl(const std::string& path,
                        const std::function<bool(std::size_t, nlohmann::json&)>& next) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    nlohmann::json doc;
    for (std::size_t i = 0; next(i, doc); ++i) out << doc.dump() << "\n";
}

inline void read_jsonl(const std::string& path,
                       const std::function<void(const nlohmann::json&)>& consume) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded()) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": invalid JSON");
        }
        consume(doc);
    }
}

}  // namespace pramr::detail
