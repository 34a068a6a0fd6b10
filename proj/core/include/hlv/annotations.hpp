#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hlv/label_space.hpp"
#include "hlv/types.hpp"

namespace hlv {

/// One annotator's labelling of one instance. `labels` holds strictly
/// increasing class indices; multiclass records carry exactly one,
/// multilabel records zero or more (empty set = "no class applies").
struct AnnotationRecord {
    std::optional<std::string> annotator;
    std::vector<std::size_t> labels;
};

struct AnnotatedInstance {
    std::string id;
    std::vector<AnnotationRecord> records;
};

/// Disaggregated annotations: every individual judgement is kept, in input
/// order. Immutable once constructed; all invariants are checked up front.
class AnnotationSet {
public:
    AnnotationSet(std::vector<AnnotatedInstance> instances, const LabelSpace& space);

    std::size_t size() const noexcept { return instances_.size(); }
    const std::vector<AnnotatedInstance>& instances() const noexcept { return instances_; }
    const AnnotatedInstance& operator[](std::size_t i) const { return instances_[i]; }

    std::size_t total_records() const noexcept { return total_records_; }

    /// True when every record carries an annotator id.
    bool has_annotator_ids() const noexcept { return all_annotated_; }

    /// Distinct annotator ids in first-appearance order. Requires
    /// has_annotator_ids().
    std::vector<std::string> annotator_ids() const;

private:
    std::vector<AnnotatedInstance> instances_;
    std::size_t total_records_ = 0;
    bool all_annotated_ = true;
};

}  // namespace hlv
