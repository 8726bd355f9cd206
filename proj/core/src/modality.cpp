#include "pramr/modality.hpp"

namespace pramr {

std::optional<Modality> modality_from_name(std::string_view name) {
    for (auto m : kAllModalities) {
        if (name == name_of(m)) return m;
    }
    return std::nullopt;
}

std::string to_string(ModalitySet set) {
    std::string out = "{";
    bool first = true;
    for (auto m : kAllModalities) {
        if (!set.contains(m)) continue;
        if (!first) out += ",";
        out += name_of(m);
        first = false;
    }
    out += "}";
    return out;
}

}  // namespace pramr
