#include "hlv/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hlv/metrics.hpp"

namespace hlv {

namespace {

double clip_prob(double q) { return std::min(std::max(q, kProbEps), 1.0 - kProbEps); }

void check_batch(const Matrix& logits, const Matrix& targets, const char* loss) {
    if (logits.rows() == 0) {
        throw ValidationError(std::string(loss) + ": empty batch");
    }
    if (logits.rows() != targets.rows() || logits.cols() != targets.cols()) {
        throw ValidationError(std::string(loss) + ": logits " + std::to_string(logits.rows()) +
                              "x" + std::to_string(logits.cols()) + " vs targets " +
                              std::to_string(targets.rows()) + "x" +
                              std::to_string(targets.cols()));
    }
}

/// Chain a gradient wrt probabilities through the task's probability
/// mapping: softmax rows (multiclass) or sigmoid cells (multilabel).
Matrix chain_to_logits(const Matrix& grad_q, const Matrix& q, TaskKind kind) {
    Matrix grad(q.rows(), q.cols());
    if (kind == TaskKind::Multiclass) {
        for (std::size_t i = 0; i < q.rows(); ++i) {
            double dot = 0.0;
            for (std::size_t k = 0; k < q.cols(); ++k) dot += grad_q(i, k) * q(i, k);
            for (std::size_t k = 0; k < q.cols(); ++k) {
                grad(i, k) = q(i, k) * (grad_q(i, k) - dot);
            }
        }
    } else {
        for (std::size_t i = 0; i < q.rows(); ++i) {
            for (std::size_t k = 0; k < q.cols(); ++k) {
                grad(i, k) = grad_q(i, k) * q(i, k) * (1.0 - q(i, k));
            }
        }
    }
    return grad;
}

/// Cross-entropy of one row against a (possibly soft) target row, in nats.
double row_cross_entropy(std::span<const double> target, std::span<const double> q,
                         TaskKind kind) {
    double loss = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double qc = clip_prob(q[k]);
        if (kind == TaskKind::Multiclass) {
            if (target[k] > 0.0) loss -= target[k] * std::log(qc);
        } else {
            loss -= target[k] * std::log(qc) + (1.0 - target[k]) * std::log(1.0 - qc);
        }
    }
    return loss;
}

/// d(cross-entropy)/d(logit) for one row. Multiclass uses the softmax
/// identity sum(target)*q - target; multilabel is q - target per cell.
void row_cross_entropy_grad(std::span<const double> target, std::span<const double> q,
                            TaskKind kind, double scale, std::span<double> out) {
    if (kind == TaskKind::Multiclass) {
        double mass = 0.0;
        for (double t : target) mass += t;
        for (std::size_t k = 0; k < q.size(); ++k) {
            out[k] += scale * (mass * q[k] - target[k]);
        }
    } else {
        for (std::size_t k = 0; k < q.size(); ++k) {
            out[k] += scale * (q[k] - target[k]);
        }
    }
}

}  // namespace

Matrix softmax_rows(const Matrix& logits) {
    Matrix q(logits.rows(), logits.cols());
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        double max = logits(i, 0);
        for (double z : logits.row(i)) max = std::max(max, z);
        double sum = 0.0;
        for (std::size_t k = 0; k < logits.cols(); ++k) {
            q(i, k) = std::exp(logits(i, k) - max);
            sum += q(i, k);
        }
        for (std::size_t k = 0; k < logits.cols(); ++k) q(i, k) /= sum;
    }
    return q;
}

Matrix sigmoid_cells(const Matrix& logits) {
    Matrix q(logits.rows(), logits.cols());
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        for (std::size_t k = 0; k < logits.cols(); ++k) {
            const double z = logits(i, k);
            q(i, k) = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                               : std::exp(z) / (1.0 + std::exp(z));
        }
    }
    return q;
}

Matrix probabilities(const Matrix& logits, TaskKind kind) {
    return kind == TaskKind::Multiclass ? softmax_rows(logits) : sigmoid_cells(logits);
}

Matrix indicator_rows(std::span<const LabelSet> labels, std::size_t classes) {
    Matrix out(labels.size(), classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t k : labels[i]) out(i, k) = 1.0;
    }
    return out;
}

LossValueGrad ce_loss(const Matrix& logits, TaskKind kind, const Matrix& hard_targets,
                      std::span<const double> weights) {
    check_batch(logits, hard_targets, "ce_loss");
    if (weights.size() != logits.rows()) {
        throw ValidationError("ce_loss: weight count does not match batch size");
    }
    for (double w : weights) {
        if (w < 0.0) throw ValidationError("ce_loss: negative weight");
    }
    const Matrix q = probabilities(logits, kind);
    const double batch = static_cast<double>(logits.rows());
    LossValueGrad out;
    out.grad = Matrix(logits.rows(), logits.cols());
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        out.value += weights[i] * row_cross_entropy(hard_targets.row(i), q.row(i), kind);
        row_cross_entropy_grad(hard_targets.row(i), q.row(i), kind, weights[i] / batch,
                               out.grad.row(i));
    }
    out.value /= batch;
    return out;
}

LossValueGrad soft_ce_loss(const Matrix& logits, TaskKind kind, const Matrix& soft_targets) {
    check_batch(logits, soft_targets, "soft_ce_loss");
    const Matrix q = probabilities(logits, kind);
    const double batch = static_cast<double>(logits.rows());
    LossValueGrad out;
    out.grad = Matrix(logits.rows(), logits.cols());
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        out.value += row_cross_entropy(soft_targets.row(i), q.row(i), kind);
        row_cross_entropy_grad(soft_targets.row(i), q.row(i), kind, 1.0 / batch,
                               out.grad.row(i));
    }
    out.value /= batch;
    return out;
}

LossValueGrad jsd_loss(const Matrix& logits, TaskKind kind, const Matrix& soft_targets) {
    check_batch(logits, soft_targets, "jsd_loss");
    const Matrix q = probabilities(logits, kind);
    const Matrix& p = soft_targets;
    const double batch = static_cast<double>(logits.rows());
    LossValueGrad out;
    Matrix grad_q(q.rows(), q.cols());
    if (kind == TaskKind::Multiclass) {
        for (std::size_t i = 0; i < q.rows(); ++i) {
            out.value += jsd_base2(p.row(i), q.row(i)) / batch;
            for (std::size_t k = 0; k < q.cols(); ++k) {
                const double qc = clip_prob(q(i, k));
                grad_q(i, k) = 0.5 * std::log2(qc / (0.5 * (p(i, k) + qc))) / batch;
            }
        }
    } else {
        const double cells = batch * static_cast<double>(q.cols());
        for (std::size_t i = 0; i < q.rows(); ++i) {
            for (std::size_t k = 0; k < q.cols(); ++k) {
                out.value += binary_jsd_base2(p(i, k), q(i, k)) / cells;
                const double qc = clip_prob(q(i, k));
                const double m1 = 0.5 * (p(i, k) + qc);
                const double m0 = 0.5 * ((1.0 - p(i, k)) + (1.0 - qc));
                grad_q(i, k) =
                    0.5 * (std::log2(qc / m1) - std::log2((1.0 - qc) / m0)) / cells;
            }
        }
    }
    out.grad = chain_to_logits(grad_q, q, kind);
    return out;
}

LossValueGrad smf1_loss(const Matrix& logits, TaskKind kind, const Matrix& soft_targets) {
    check_batch(logits, soft_targets, "smf1_loss");
    const Matrix q = probabilities(logits, kind);
    const Matrix& p = soft_targets;
    const double batch = static_cast<double>(logits.rows());
    LossValueGrad out;
    Matrix grad_q(q.rows(), q.cols());
    if (kind == TaskKind::Multiclass) {
        // Accumulates per row exactly like the soft accuracy metric so the
        // loss/metric identity holds bitwise.
        double overlap = 0.0;
        for (std::size_t i = 0; i < q.rows(); ++i) {
            double row = 0.0;
            for (std::size_t k = 0; k < q.cols(); ++k) {
                row += std::min(p(i, k), q(i, k));
                // At a tie the min follows the prediction branch.
                if (q(i, k) <= p(i, k)) grad_q(i, k) = -1.0 / batch;
            }
            overlap += row;
        }
        out.value = 1.0 - overlap / batch;
    } else {
        double overlap = 0.0;
        double mass = 0.0;
        for (std::size_t i = 0; i < q.rows(); ++i) {
            for (std::size_t k = 0; k < q.cols(); ++k) {
                overlap += std::min(p(i, k), q(i, k));
                mass += p(i, k) + q(i, k);
            }
        }
        out.value = mass == 0.0 ? 0.0 : 1.0 - 2.0 * overlap / mass;
        if (mass > 0.0) {
            for (std::size_t i = 0; i < q.rows(); ++i) {
                for (std::size_t k = 0; k < q.cols(); ++k) {
                    const double selected = q(i, k) <= p(i, k) ? 1.0 : 0.0;
                    grad_q(i, k) = -2.0 * (selected * mass - overlap) / (mass * mass);
                }
            }
        }
    }
    out.grad = chain_to_logits(grad_q, q, kind);
    return out;
}

LossValueGrad smacro_f1_loss(const Matrix& logits, TaskKind kind, const Matrix& soft_targets) {
    check_batch(logits, soft_targets, "smacro_f1_loss");
    const Matrix q = probabilities(logits, kind);
    const Matrix& p = soft_targets;
    const double classes = static_cast<double>(q.cols());
    LossValueGrad out;
    Matrix grad_q(q.rows(), q.cols());
    double f1_sum = 0.0;
    for (std::size_t k = 0; k < q.cols(); ++k) {
        double overlap = 0.0;
        double mass = 0.0;
        for (std::size_t i = 0; i < q.rows(); ++i) {
            overlap += std::min(p(i, k), q(i, k));
            mass += p(i, k) + q(i, k);
        }
        if (mass == 0.0) {
            f1_sum += 1.0;  // class empty on both sides contributes no loss
            continue;
        }
        f1_sum += 2.0 * overlap / mass;
        for (std::size_t i = 0; i < q.rows(); ++i) {
            const double selected = q(i, k) <= p(i, k) ? 1.0 : 0.0;
            grad_q(i, k) = -2.0 * (selected * mass - overlap) / (mass * mass * classes);
        }
    }
    out.value = 1.0 - f1_sum / classes;
    out.grad = chain_to_logits(grad_q, q, kind);
    return out;
}

LossValueGrad la_loss(const Matrix& logits, TaskKind kind,
                      std::span<const std::vector<LabelSet>> annotations,
                      LossAggregation mode) {
    if (annotations.size() != logits.rows()) {
        throw ValidationError("la_loss: annotation group count does not match batch size");
    }
    const Matrix q = probabilities(logits, kind);
    const double batch = static_cast<double>(logits.rows());
    LossValueGrad out;
    out.grad = Matrix(logits.rows(), logits.cols());
    std::vector<double> target(logits.cols());
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        if (annotations[i].empty()) {
            throw ValidationError("la_loss: instance " + std::to_string(i) +
                                  " has no annotations");
        }
        std::size_t best = 0;
        double best_loss = 0.0;
        for (std::size_t a = 0; a < annotations[i].size(); ++a) {
            std::fill(target.begin(), target.end(), 0.0);
            for (std::size_t k : annotations[i][a]) target[k] = 1.0;
            const double loss = row_cross_entropy(target, q.row(i), kind);
            const bool better = mode == LossAggregation::Min ? loss < best_loss
                                                             : loss > best_loss;
            if (a == 0 || better) {
                best = a;
                best_loss = loss;
            }
        }
        out.value += best_loss / batch;
        std::fill(target.begin(), target.end(), 0.0);
        for (std::size_t k : annotations[i][best]) target[k] = 1.0;
        row_cross_entropy_grad(target, q.row(i), kind, 1.0 / batch, out.grad.row(i));
    }
    return out;
}

SlmvValueGrad slmv_loss(const Matrix& soft_logits, const Matrix& hard_logits, TaskKind kind,
                        const Matrix& soft_targets, const Matrix& hard_targets) {
    if (soft_logits.rows() != hard_logits.rows()) {
        throw ValidationError("slmv_loss: head batch sizes differ");
    }
    const std::vector<double> unit(hard_logits.rows(), 1.0);
    LossValueGrad soft = soft_ce_loss(soft_logits, kind, soft_targets);
    LossValueGrad hard = ce_loss(hard_logits, kind, hard_targets, unit);
    return {soft.value + hard.value, std::move(soft.grad), std::move(hard.grad)};
}

}  // namespace hlv
