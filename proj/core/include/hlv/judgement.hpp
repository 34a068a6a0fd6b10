#pragma once

#include "hlv/annotations.hpp"
#include "hlv/label_space.hpp"
#include "hlv/types.hpp"

namespace hlv {

/// Multiclass rows must sum to one within this tolerance.
inline constexpr double kRowSumTolerance = 1e-9;

/// N×K matrix of per-class judgement proportions in [0,1]. For multiclass
/// tasks each row is a distribution over classes; for multilabel tasks each
/// cell is an independent proportion.
class JudgementMatrix {
public:
    JudgementMatrix(Matrix values, TaskKind kind);

    const Matrix& values() const noexcept { return values_; }
    TaskKind kind() const noexcept { return kind_; }
    std::size_t examples() const noexcept { return values_.rows(); }
    std::size_t classes() const noexcept { return values_.cols(); }

    friend bool operator==(const JudgementMatrix&, const JudgementMatrix&) = default;

private:
    Matrix values_;
    TaskKind kind_;
};

/// {0,1}-valued assignment. Multiclass rows are one-hot.
class HardAssignment {
public:
    HardAssignment(Matrix values, TaskKind kind);

    const Matrix& values() const noexcept { return values_; }
    TaskKind kind() const noexcept { return kind_; }
    std::size_t examples() const noexcept { return values_.rows(); }
    std::size_t classes() const noexcept { return values_.cols(); }

    /// The same values viewed as a judgement matrix ({0,1} entries are valid
    /// proportions, and one-hot rows satisfy the unity constraint).
    JudgementMatrix as_judgements() const { return {values_, kind_}; }

    friend bool operator==(const HardAssignment&, const HardAssignment&) = default;

private:
    Matrix values_;
    TaskKind kind_;
};

/// Per-instance proportion of records choosing each class. Row order follows
/// instance order. Errors on an empty annotation set.
JudgementMatrix build_judgements(const AnnotationSet& annotations, const LabelSpace& space);

/// Collapse judgements to a hard assignment: multiclass rows become one-hot
/// at the argmax (ties broken toward the lowest class index), multilabel
/// cells become 1 where the value strictly exceeds 0.5.
HardAssignment harden(const JudgementMatrix& judgements);

}  // namespace hlv
