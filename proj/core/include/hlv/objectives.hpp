#pragma once

#include <span>
#include <vector>

#include "hlv/types.hpp"

namespace hlv {

/// Predicted probabilities are clipped to [kProbEps, 1-kProbEps] before any
/// logarithm.
inline constexpr double kProbEps = 1e-12;

/// Loss value together with its gradient with respect to the logits.
struct LossValueGrad {
    double value = 0.0;
    Matrix grad;
};

/// Row-wise softmax (multiclass probability mapping).
Matrix softmax_rows(const Matrix& logits);

/// Cell-wise sigmoid (multilabel probability mapping).
Matrix sigmoid_cells(const Matrix& logits);

/// The task's logit-to-probability mapping; part of every loss contract.
Matrix probabilities(const Matrix& logits, TaskKind kind);

using LabelSet = std::vector<std::size_t>;

/// B×K {0,1} rows from per-example label sets.
Matrix indicator_rows(std::span<const LabelSet> labels, std::size_t classes);

/// Weighted cross-entropy against hard targets, averaged over the batch.
/// Multiclass: -w_i log q(label_i); multilabel: per-cell binary
/// cross-entropy. Values in nats.
LossValueGrad ce_loss(const Matrix& logits, TaskKind kind, const Matrix& hard_targets,
                      std::span<const double> weights);

/// Cross-entropy against soft target rows, averaged over the batch. Values
/// in nats.
LossValueGrad soft_ce_loss(const Matrix& logits, TaskKind kind, const Matrix& soft_targets);

/// Mean base-2 JSD between target rows and predicted rows (multiclass), or
/// mean per-cell binary JSD (multilabel).
LossValueGrad jsd_loss(const Matrix& logits, TaskKind kind, const Matrix& soft_targets);

/// 1 - soft accuracy (multiclass) or 1 - soft micro F1 (multilabel),
/// computed over the batch. The batch acts as the estimator of the corpus
/// metric; at min ties the gradient follows the prediction branch.
LossValueGrad smf1_loss(const Matrix& logits, TaskKind kind, const Matrix& soft_targets);

/// 1 - soft macro F1 over the batch; a class with zero mass on both sides
/// contributes no loss.
LossValueGrad smacro_f1_loss(const Matrix& logits, TaskKind kind, const Matrix& soft_targets);

enum class LossAggregation { Min, Max };

/// Per-instance cross-entropy over each annotation, reduced by min or max.
/// Gradient flows only through the selected annotation (ties: lowest
/// annotation index). `annotations[i]` lists the label sets for row i.
LossValueGrad la_loss(const Matrix& logits, TaskKind kind,
                      std::span<const std::vector<LabelSet>> annotations,
                      LossAggregation mode);

/// Multitask loss: soft cross-entropy on the first head plus weighted-free
/// cross-entropy on the second, each averaged over the batch and summed with
/// unit task weights.
struct SlmvValueGrad {
    double value = 0.0;
    Matrix soft_grad;
    Matrix hard_grad;
};

SlmvValueGrad slmv_loss(const Matrix& soft_logits, const Matrix& hard_logits, TaskKind kind,
                        const Matrix& soft_targets, const Matrix& hard_targets);

}  // namespace hlv
