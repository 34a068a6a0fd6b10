#include "hlv/aggregation.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

namespace hlv {

namespace {

constexpr std::array<Method, 14> kAllMethods = {
    Method::ReL, Method::MV,   Method::AR,   Method::ARh,  Method::AL,
    Method::SL,  Method::SLMV, Method::AE,   Method::AEh,  Method::JSD,
    Method::SmF1, Method::SMF1, Method::LAmin, Method::LAmax,
};

constexpr std::array<std::string_view, 14> kMethodNames = {
    "ReL", "MV", "AR", "ARh", "AL", "SL", "SLMV", "AE", "AEh",
    "JSD", "SmF1", "SMF1", "LA-min", "LA-max",
};

/// Majority-voted label sets per instance: argmax (lowest-index ties) for
/// multiclass, judgement > 0.5 for multilabel (possibly empty).
std::vector<std::vector<std::size_t>> majority_sets(const JudgementMatrix& judgements) {
    const HardAssignment hard = harden(judgements);
    std::vector<std::vector<std::size_t>> sets(hard.examples());
    for (std::size_t i = 0; i < hard.examples(); ++i) {
        for (std::size_t k = 0; k < hard.classes(); ++k) {
            if (hard.values()(i, k) == 1.0) sets[i].push_back(k);
        }
    }
    return sets;
}

bool contains_all(const std::vector<std::size_t>& labels,
                  const std::vector<std::size_t>& majority) {
    return std::includes(labels.begin(), labels.end(), majority.begin(), majority.end());
}

void require_annotators(const AnnotationSet& annotations, std::string_view method) {
    if (!annotations.has_annotator_ids()) {
        throw ValidationError(std::string(method) +
                              " requires an annotator id on every record");
    }
}

}  // namespace

std::string_view method_name(Method method) {
    return kMethodNames[static_cast<std::size_t>(method)];
}

std::optional<Method> parse_method(std::string_view name) {
    for (std::size_t i = 0; i < kMethodNames.size(); ++i) {
        if (kMethodNames[i] == name) return kAllMethods[i];
    }
    return std::nullopt;
}

std::span<const Method> all_methods() { return kAllMethods; }

bool method_needs_annotators(Method method) {
    return method == Method::AR || method == Method::ARh || method == Method::AE ||
           method == Method::AEh;
}

bool method_supports_multilabel(Method method) { return method != Method::AL; }

DisaggregatedTarget target_rel(const AnnotationSet& annotations, const LabelSpace&) {
    DisaggregatedTarget target;
    target.pairs.reserve(annotations.total_records());
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        for (const auto& record : annotations[i].records) {
            target.pairs.push_back({i, record.labels});
        }
    }
    return target;
}

WeightedHardTarget target_mv(const AnnotationSet& annotations, const LabelSpace& space) {
    const JudgementMatrix judgements = build_judgements(annotations, space);
    return {harden(judgements), std::vector<double>(annotations.size(), 1.0)};
}

std::map<std::string, double> annotator_scores(const AnnotationSet& annotations,
                                               const LabelSpace& space, bool hard) {
    require_annotators(annotations, hard ? "ARh" : "AR");
    const JudgementMatrix judgements = build_judgements(annotations, space);
    const auto majorities = majority_sets(judgements);

    struct Tally {
        double sum = 0.0;      // AR: judgement mass of agreed majorities
        std::size_t hits = 0;  // AR: instances agreed on (non-empty majority)
        std::size_t agreements = 0;
        std::size_t total = 0;
    };
    std::map<std::string, Tally> tallies;
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        const auto& majority = majorities[i];
        for (const auto& record : annotations[i].records) {
            Tally& tally = tallies[*record.annotator];
            ++tally.total;
            const bool agrees = contains_all(record.labels, majority);
            if (agrees) ++tally.agreements;
            if (agrees && !majority.empty()) {
                double value = 0.0;
                for (std::size_t k : majority) value += judgements.values()(i, k);
                tally.sum += value / static_cast<double>(majority.size());
                ++tally.hits;
            }
        }
    }

    std::map<std::string, double> scores;
    for (const auto& [annotator, tally] : tallies) {
        if (hard) {
            scores[annotator] =
                static_cast<double>(tally.agreements) / static_cast<double>(tally.total);
        } else {
            scores[annotator] =
                tally.hits == 0 ? 0.0 : tally.sum / static_cast<double>(tally.hits);
        }
    }
    return scores;
}

WeightedHardTarget target_ar(const AnnotationSet& annotations, const LabelSpace& space,
                             bool hard) {
    const auto scores = annotator_scores(annotations, space, hard);
    WeightedHardTarget target = target_mv(annotations, space);
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        double weight = 0.0;
        for (const auto& record : annotations[i].records) {
            weight += scores.at(*record.annotator);
        }
        target.weights[i] = weight;
    }
    return target;
}

DisaggregatedTarget target_al(const AnnotationSet& annotations, const LabelSpace& space) {
    if (space.kind() != TaskKind::Multiclass) {
        throw ValidationError("AL supports single-label (multiclass) tasks only");
    }
    DisaggregatedTarget target;
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        std::vector<bool> chosen(space.size(), false);
        for (const auto& record : annotations[i].records) chosen[record.labels.front()] = true;
        for (std::size_t k = 0; k < space.size(); ++k) {
            if (chosen[k]) target.pairs.push_back({i, {k}});
        }
    }
    return target;
}

SoftRowsTarget target_sl(const AnnotationSet& annotations, const LabelSpace& space) {
    return {build_judgements(annotations, space)};
}

MultiTaskTarget target_slmv(const AnnotationSet& annotations, const LabelSpace& space) {
    JudgementMatrix judgements = build_judgements(annotations, space);
    HardAssignment hard = harden(judgements);
    return {std::move(judgements), std::move(hard)};
}

PerAnnotatorTarget target_per_annotator(const AnnotationSet& annotations,
                                        const LabelSpace&) {
    require_annotators(annotations, "per-annotator training");
    PerAnnotatorTarget target;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        for (const auto& record : annotations[i].records) {
            auto [it, inserted] = index.emplace(*record.annotator, target.annotators.size());
            if (inserted) {
                target.annotators.push_back(*record.annotator);
                target.pairs.emplace_back();
            }
            target.pairs[it->second].push_back({i, record.labels});
        }
    }
    return target;
}

MethodTarget build_target(Method method, const AnnotationSet& annotations,
                          const LabelSpace& space) {
    switch (method) {
        case Method::ReL:
        case Method::LAmin:
        case Method::LAmax:
            return target_rel(annotations, space);
        case Method::MV:
            return target_mv(annotations, space);
        case Method::AR:
            return target_ar(annotations, space, false);
        case Method::ARh:
            return target_ar(annotations, space, true);
        case Method::AL:
            return target_al(annotations, space);
        case Method::SL:
        case Method::JSD:
        case Method::SmF1:
        case Method::SMF1:
            return target_sl(annotations, space);
        case Method::SLMV:
            return target_slmv(annotations, space);
        case Method::AE:
        case Method::AEh:
            return target_per_annotator(annotations, space);
    }
    throw ValidationError("unknown training method");
}

}  // namespace hlv
