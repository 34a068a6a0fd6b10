#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "hlv/judgement.hpp"
#include "hlv/types.hpp"

namespace hlv {

/// Jensen-Shannon divergence with base-2 logarithms; 0 iff a = b, 1 for
/// disjoint supports. Inputs are distributions over the same support.
double jsd_base2(std::span<const double> a, std::span<const double> b);

/// JSD between the two-class distributions [p, 1-p] and [q, 1-q].
double binary_jsd_base2(double p, double q);

// All pairwise metrics below require shape(P) = shape(Q) and
// kind(P) = kind(Q); hard metrics collapse their inputs with harden().
// Positive orientation: 1 is a perfect match.

/// Fraction of rows whose hardened argmax agrees. Multiclass only.
double hard_accuracy(const JudgementMatrix& reference, const JudgementMatrix& predicted);

/// Mean over classes of the hardened per-class F1. A class absent from both
/// sides contributes 1. Multiclass uses argmax indicators, multilabel the
/// >0.5 indicators.
double hard_macro_f1(const JudgementMatrix& reference, const JudgementMatrix& predicted);

/// Micro F1 over the >0.5 indicators. Multilabel only; both sides all-zero
/// gives 1.
double hard_micro_f1(const JudgementMatrix& reference, const JudgementMatrix& predicted);

/// Mean per-row overlap sum(min(P,Q)). Multiclass only; reduces to hard
/// accuracy when both sides are one-hot.
double soft_accuracy(const JudgementMatrix& reference, const JudgementMatrix& predicted);

/// 2*sum(min) / sum(P+Q) over all cells; defined for both kinds. Equals
/// soft_accuracy under multiclass unity constraints, and hard_micro_f1 on
/// {0,1} inputs. Both sides all-zero gives 1.
double soft_micro_f1(const JudgementMatrix& reference, const JudgementMatrix& predicted);

/// Mean over classes of the per-class soft F1; a class with zero mass on
/// both sides contributes 1. Defined for both kinds.
double soft_macro_f1(const JudgementMatrix& reference, const JudgementMatrix& predicted);

/// 1 - mean per-row JSD (base 2). Multiclass only.
double po_jsd(const JudgementMatrix& reference, const JudgementMatrix& predicted);

/// 1 - mean per-cell binary JSD. Multilabel only.
double multilabel_po_jsd(const JudgementMatrix& reference, const JudgementMatrix& predicted);

/// Pearson correlation between per-row normalized entropies (base 2,
/// normalized by log2 K). Multiclass only. Throws UndefinedMetricError when
/// either side has (numerically) constant entropies.
double entropy_correlation(const JudgementMatrix& reference, const JudgementMatrix& predicted);

/// Mean over classes of the per-class Pearson correlation of binary cell
/// entropies. Multilabel only; throws UndefinedMetricError if any class is
/// degenerate on either side.
double multilabel_entropy_correlation(const JudgementMatrix& reference,
                                      const JudgementMatrix& predicted);

struct ClassPRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Soft precision/recall/F1 for one class: overlap over predicted mass,
/// overlap over reference mass, and their harmonic mean. A side with zero
/// mass scores 1 on its own ratio when the other side is also empty; when
/// only its own denominator vanishes the ratio is 1 by convention and the
/// F1 stays 0.
ClassPRF soft_class_prf(const JudgementMatrix& reference, const JudgementMatrix& predicted,
                        std::size_t klass);

/// Scalar evaluation results for one (reference, prediction) pair.
class MetricReport {
public:
    MetricReport(TaskKind kind, std::size_t examples, std::size_t classes)
        : kind_(kind), examples_(examples), classes_(classes) {}

    TaskKind kind() const noexcept { return kind_; }
    std::size_t examples() const noexcept { return examples_; }
    std::size_t classes() const noexcept { return classes_; }

    void set(std::string name, double value) { values_[std::move(name)] = value; }
    bool has(std::string_view name) const;
    double at(std::string_view name) const;
    const std::map<std::string, double>& values() const noexcept { return values_; }

    void set_entropy_correlation(std::optional<double> value) { entropy_corr_ = value; }
    std::optional<double> entropy_correlation() const noexcept { return entropy_corr_; }
    bool entropy_correlation_defined() const noexcept { return entropy_corr_.has_value(); }

    /// Flat JSON object; numbers rounded to 9 significant digits. An
    /// undefined entropy correlation serializes as null plus
    /// "entropy_correlation_defined": false.
    std::string to_json() const;
    static MetricReport from_json(std::string_view text);

private:
    TaskKind kind_;
    std::size_t examples_;
    std::size_t classes_;
    std::map<std::string, double> values_;
    std::optional<double> entropy_corr_;
};

/// All metrics appropriate to the task kind, plus the selection score.
/// Multiclass reports accuracy / macro_f1 / soft_accuracy / soft_macro_f1 /
/// po_jsd / entropy_correlation; multilabel reports micro_f1 / macro_f1 /
/// soft_micro_f1 / soft_macro_f1 / po_jsd / entropy_correlation.
MetricReport compute_report(const JudgementMatrix& reference, const JudgementMatrix& predicted);

/// Geometric mean of hard accuracy (or micro F1), PO-JSD, soft accuracy (or
/// soft micro F1) and the entropy correlation mapped to [0,1] via
/// (e+1)/2. Macro scores are excluded. An undefined entropy correlation is
/// left out of the mean; any included zero forces a zero score.
double selection_score(const MetricReport& report);

}  // namespace hlv
