#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hlv/types.hpp"

namespace hlv {

/// Ordered set of class names for one task. Position defines the class index
/// used everywhere else.
class LabelSpace {
public:
    /// Requires at least two classes, all names unique and non-empty.
    LabelSpace(std::vector<std::string> classes, TaskKind kind);

    std::size_t size() const noexcept { return classes_.size(); }
    TaskKind kind() const noexcept { return kind_; }
    const std::vector<std::string>& classes() const noexcept { return classes_; }
    const std::string& name_of(std::size_t index) const { return classes_.at(index); }

    std::optional<std::size_t> index_of(std::string_view name) const;

private:
    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::vector<std::string> classes_;
    TaskKind kind_;
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
};

}  // namespace hlv
