#include "hlv/annotations.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace hlv {

AnnotationSet::AnnotationSet(std::vector<AnnotatedInstance> instances, const LabelSpace& space)
    : instances_(std::move(instances)) {
    std::unordered_set<std::string> seen_ids;
    for (const auto& instance : instances_) {
        if (!seen_ids.insert(instance.id).second) {
            throw ValidationError("duplicate instance id '" + instance.id + "'");
        }
        if (instance.records.empty()) {
            throw ValidationError("instance '" + instance.id + "' has no annotation records");
        }
        std::set<std::string> annotators;
        for (const auto& record : instance.records) {
            if (space.kind() == TaskKind::Multiclass && record.labels.size() != 1) {
                throw ValidationError("multiclass record on instance '" + instance.id +
                                      "' has " + std::to_string(record.labels.size()) +
                                      " labels, expected exactly 1");
            }
            for (std::size_t label : record.labels) {
                if (label >= space.size()) {
                    throw ValidationError("label index " + std::to_string(label) +
                                          " out of range on instance '" + instance.id + "'");
                }
            }
            if (!std::is_sorted(record.labels.begin(), record.labels.end()) ||
                std::adjacent_find(record.labels.begin(), record.labels.end()) !=
                    record.labels.end()) {
                throw ValidationError("label set on instance '" + instance.id +
                                      "' is not strictly increasing");
            }
            if (record.annotator.has_value()) {
                if (!annotators.insert(*record.annotator).second) {
                    throw ValidationError("annotator '" + *record.annotator +
                                          "' appears twice on instance '" + instance.id + "'");
                }
            } else {
                all_annotated_ = false;
            }
            ++total_records_;
        }
    }
}

std::vector<std::string> AnnotationSet::annotator_ids() const {
    if (!all_annotated_) {
        throw ValidationError("annotation set has records without annotator ids");
    }
    std::vector<std::string> ids;
    std::unordered_set<std::string> seen;
    for (const auto& instance : instances_) {
        for (const auto& record : instance.records) {
            if (seen.insert(*record.annotator).second) ids.push_back(*record.annotator);
        }
    }
    return ids;
}

}  // namespace hlv
