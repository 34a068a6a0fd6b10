#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hlv/annotations.hpp"
#include "hlv/judgement.hpp"
#include "hlv/label_space.hpp"

namespace hlv {

/// The 14 training methods, in catalogue order.
enum class Method {
    ReL,
    MV,
    AR,
    ARh,
    AL,
    SL,
    SLMV,
    AE,
    AEh,
    JSD,
    SmF1,
    SMF1,
    LAmin,
    LAmax,
};

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);
std::span<const Method> all_methods();

/// AR, ARh, AE and AEh score or model individual annotators.
bool method_needs_annotators(Method method);

/// Every method except AL supports multilabel tasks.
bool method_supports_multilabel(Method method);

/// One (instance, label set) training pair.
struct AnnotationPair {
    std::size_t instance = 0;
    std::vector<std::size_t> labels;

    friend bool operator==(const AnnotationPair&, const AnnotationPair&) = default;
};

/// Every annotation kept as its own training pair (ReL, AL, and the
/// per-instance grouping behind LA-min/LA-max).
struct DisaggregatedTarget {
    std::vector<AnnotationPair> pairs;
};

/// Full judgement rows as soft targets (SL, JSD, SmF1, SMF1).
struct SoftRowsTarget {
    JudgementMatrix rows;
};

/// Hard labels with a per-instance loss weight (MV, AR, ARh).
struct WeightedHardTarget {
    HardAssignment labels;
    std::vector<double> weights;
};

/// Each annotator's own pairs, for per-annotator heads (AE, AEh).
struct PerAnnotatorTarget {
    std::vector<std::string> annotators;
    std::vector<std::vector<AnnotationPair>> pairs;  // indexed like annotators
};

/// Soft rows for the first head plus majority-voted labels for the second
/// (SLMV).
struct MultiTaskTarget {
    JudgementMatrix soft;
    HardAssignment hard;
};

using MethodTarget = std::variant<DisaggregatedTarget, SoftRowsTarget, WeightedHardTarget,
                                  PerAnnotatorTarget, MultiTaskTarget>;

/// One pair per annotation record, in input order.
DisaggregatedTarget target_rel(const AnnotationSet& annotations, const LabelSpace& space);

/// Majority-voted labels (argmax with lowest-index ties for multiclass,
/// judgement > 0.5 for multilabel), all weights 1.
WeightedHardTarget target_mv(const AnnotationSet& annotations, const LabelSpace& space);

/// Annotator ranking scores. Soft scores average the judgement value of the
/// majority-voted label over the instances where the annotator chose it;
/// hard scores count the fraction of the annotator's instances where they
/// agree with the majority. An annotator that never agrees scores 0.
/// Requires annotator ids on every record.
std::map<std::string, double> annotator_scores(const AnnotationSet& annotations,
                                               const LabelSpace& space, bool hard);

/// Majority-voted labels weighted by the summed ranking scores of each
/// instance's annotators.
WeightedHardTarget target_ar(const AnnotationSet& annotations, const LabelSpace& space,
                             bool hard);

/// Each class chosen by at least one annotator becomes its own pair, emitted
/// once per instance in class order. Multiclass only.
DisaggregatedTarget target_al(const AnnotationSet& annotations, const LabelSpace& space);

/// Judgement rows as soft targets.
SoftRowsTarget target_sl(const AnnotationSet& annotations, const LabelSpace& space);

/// Soft rows paired with majority-voted labels for a second head.
MultiTaskTarget target_slmv(const AnnotationSet& annotations, const LabelSpace& space);

/// Pairs grouped per annotator, annotators in first-appearance order.
/// Requires annotator ids on every record.
PerAnnotatorTarget target_per_annotator(const AnnotationSet& annotations,
                                        const LabelSpace& space);

/// Target construction for any method, dispatching to the builders above.
MethodTarget build_target(Method method, const AnnotationSet& annotations,
                          const LabelSpace& space);

}  // namespace hlv
