#include "hlv/label_space.hpp"

namespace hlv {

LabelSpace::LabelSpace(std::vector<std::string> classes, TaskKind kind)
    : classes_(std::move(classes)), kind_(kind) {
    if (classes_.size() < 2) {
        throw ValidationError("label space needs at least 2 classes, got " +
                              std::to_string(classes_.size()));
    }
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        if (classes_[i].empty()) {
            throw ValidationError("class name at index " + std::to_string(i) + " is empty");
        }
        if (!index_.emplace(classes_[i], i).second) {
            throw ValidationError("duplicate class name '" + classes_[i] + "'");
        }
    }
}

std::optional<std::size_t> LabelSpace::index_of(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

}  // namespace hlv
