#include "hlv/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <variant>

#include "hlv/objectives.hpp"

namespace hlv {

namespace {

enum class LossFamily { HardCE, SoftCE, Jsd, SmF1, SMacroF1, LossAgg, Slmv };

LossFamily loss_family(Method method) {
    switch (method) {
        case Method::ReL:
        case Method::MV:
        case Method::AR:
        case Method::ARh:
        case Method::AL:
        case Method::AE:
        case Method::AEh:
            return LossFamily::HardCE;
        case Method::SL:
            return LossFamily::SoftCE;
        case Method::JSD:
            return LossFamily::Jsd;
        case Method::SmF1:
            return LossFamily::SmF1;
        case Method::SMF1:
            return LossFamily::SMacroF1;
        case Method::LAmin:
        case Method::LAmax:
            return LossFamily::LossAgg;
        case Method::SLMV:
            return LossFamily::Slmv;
    }
    throw ValidationError("unknown training method");
}

/// Flattened per-example view of a method target.
struct TrainingPlan {
    LossFamily family = LossFamily::HardCE;
    std::vector<std::size_t> instances;  // example -> feature row
    std::vector<std::size_t> heads;      // example -> head index
    std::vector<LabelSet> hard_labels;   // HardCE
    std::vector<double> weights;         // HardCE
    Matrix soft_rows;                    // SoftCE/Jsd/SmF1/SMacroF1/Slmv, per instance
    Matrix hard_rows;                    // Slmv, per instance
    std::vector<std::vector<LabelSet>> groups;  // LossAgg, per instance
    std::size_t head_count = 1;
    std::vector<std::string> annotators;
};

std::vector<LabelSet> label_sets_from(const HardAssignment& hard) {
    std::vector<LabelSet> sets(hard.examples());
    for (std::size_t i = 0; i < hard.examples(); ++i) {
        for (std::size_t k = 0; k < hard.classes(); ++k) {
            if (hard.values()(i, k) == 1.0) sets[i].push_back(k);
        }
    }
    return sets;
}

void check_instances(std::span<const std::size_t> instances, std::size_t available) {
    for (std::size_t i : instances) {
        if (i >= available) {
            throw ValidationError("target references instance " + std::to_string(i) +
                                  " but only " + std::to_string(available) +
                                  " feature rows were given");
        }
    }
}

void check_instance_rows(std::size_t rows, std::size_t features) {
    if (rows != features) {
        throw ValidationError("target has " + std::to_string(rows) +
                              " instances but features have " + std::to_string(features) +
                              " rows");
    }
}

TrainingPlan make_plan(Method method, const MethodTarget& target, std::size_t feature_rows,
                       const LabelSpace& space) {
    TrainingPlan plan;
    plan.family = loss_family(method);
    switch (plan.family) {
        case LossFamily::HardCE: {
            if (method == Method::AE || method == Method::AEh) {
                const auto* per = std::get_if<PerAnnotatorTarget>(&target);
                if (per == nullptr) {
                    throw ValidationError("AE/AEh expects a per-annotator target");
                }
                plan.annotators = per->annotators;
                plan.head_count = per->annotators.size();
                for (std::size_t a = 0; a < per->pairs.size(); ++a) {
                    for (const auto& pair : per->pairs[a]) {
                        plan.instances.push_back(pair.instance);
                        plan.heads.push_back(a);
                        plan.hard_labels.push_back(pair.labels);
                        plan.weights.push_back(1.0);
                    }
                }
            } else if (const auto* weighted = std::get_if<WeightedHardTarget>(&target)) {
                check_instance_rows(weighted->labels.examples(), feature_rows);
                plan.instances.resize(weighted->labels.examples());
                std::iota(plan.instances.begin(), plan.instances.end(), 0);
                plan.heads.assign(plan.instances.size(), 0);
                plan.hard_labels = label_sets_from(weighted->labels);
                plan.weights = weighted->weights;
            } else if (const auto* pairs = std::get_if<DisaggregatedTarget>(&target)) {
                for (const auto& pair : pairs->pairs) {
                    plan.instances.push_back(pair.instance);
                    plan.heads.push_back(0);
                    plan.hard_labels.push_back(pair.labels);
                    plan.weights.push_back(1.0);
                }
            } else {
                throw ValidationError("target variant does not match the training method");
            }
            break;
        }
        case LossFamily::SoftCE:
        case LossFamily::Jsd:
        case LossFamily::SmF1:
        case LossFamily::SMacroF1: {
            const auto* soft = std::get_if<SoftRowsTarget>(&target);
            if (soft == nullptr) throw ValidationError("method expects a soft-rows target");
            check_instance_rows(soft->rows.examples(), feature_rows);
            plan.soft_rows = soft->rows.values();
            plan.instances.resize(feature_rows);
            std::iota(plan.instances.begin(), plan.instances.end(), 0);
            plan.heads.assign(plan.instances.size(), 0);
            break;
        }
        case LossFamily::LossAgg: {
            const auto* pairs = std::get_if<DisaggregatedTarget>(&target);
            if (pairs == nullptr) {
                throw ValidationError("LA-min/LA-max expect a disaggregated target");
            }
            plan.groups.resize(feature_rows);
            for (const auto& pair : pairs->pairs) {
                if (pair.instance >= feature_rows) {
                    throw ValidationError("target references instance " +
                                          std::to_string(pair.instance) +
                                          " beyond the feature rows");
                }
                plan.groups[pair.instance].push_back(pair.labels);
            }
            for (std::size_t i = 0; i < plan.groups.size(); ++i) {
                if (plan.groups[i].empty()) {
                    throw ValidationError("instance " + std::to_string(i) +
                                          " has no annotations for loss aggregation");
                }
            }
            plan.instances.resize(feature_rows);
            std::iota(plan.instances.begin(), plan.instances.end(), 0);
            plan.heads.assign(plan.instances.size(), 0);
            break;
        }
        case LossFamily::Slmv: {
            const auto* multi = std::get_if<MultiTaskTarget>(&target);
            if (multi == nullptr) throw ValidationError("SLMV expects a multitask target");
            check_instance_rows(multi->soft.examples(), feature_rows);
            plan.soft_rows = multi->soft.values();
            plan.hard_rows = multi->hard.values();
            plan.head_count = 2;
            plan.instances.resize(feature_rows);
            std::iota(plan.instances.begin(), plan.instances.end(), 0);
            plan.heads.assign(plan.instances.size(), 0);
            break;
        }
    }
    check_instances(plan.instances, feature_rows);
    if (plan.instances.empty()) throw ValidationError("training target is empty");
    if (space.kind() == TaskKind::Multiclass) {
        for (const auto& labels : plan.hard_labels) {
            if (labels.size() != 1) {
                throw ValidationError("multiclass training pair without exactly one label");
            }
        }
    }
    return plan;
}

struct BatchForward {
    Matrix hidden;  // B×H post-ReLU; empty when the model is linear
    Matrix logits;  // B×K
};

BatchForward forward_batch(const Model& model, const FeatureSet& features,
                           std::span<const std::size_t> instances,
                           std::span<const std::size_t> heads) {
    BatchForward fwd;
    const std::size_t batch = instances.size();
    fwd.logits = Matrix(batch, model.classes);
    if (model.hidden > 0) fwd.hidden = Matrix(batch, model.hidden);
    for (std::size_t b = 0; b < batch; ++b) {
        const Head& head = model.heads[heads[b]];
        auto logits = fwd.logits.row(b);
        std::copy(head.bias.begin(), head.bias.end(), logits.begin());
        if (model.hidden > 0) {
            auto hidden = fwd.hidden.row(b);
            for (const auto& entry : features.row(instances[b])) {
                for (std::size_t j = 0; j < model.hidden; ++j) {
                    hidden[j] += entry.value * model.encoder_weights(entry.index, j);
                }
            }
            for (std::size_t j = 0; j < model.hidden; ++j) {
                hidden[j] = std::max(0.0, hidden[j] + model.encoder_bias[j]);
            }
            for (std::size_t j = 0; j < model.hidden; ++j) {
                if (hidden[j] == 0.0) continue;
                for (std::size_t k = 0; k < model.classes; ++k) {
                    logits[k] += hidden[j] * head.weights(j, k);
                }
            }
        } else {
            for (const auto& entry : features.row(instances[b])) {
                for (std::size_t k = 0; k < model.classes; ++k) {
                    logits[k] += entry.value * head.weights(entry.index, k);
                }
            }
        }
    }
    return fwd;
}

/// One SGD step from d(loss)/d(logits). Encoder backprop reads the heads
/// before they are updated.
void apply_batch_update(Model& model, const FeatureSet& features,
                        std::span<const std::size_t> instances,
                        std::span<const std::size_t> heads, const BatchForward& fwd,
                        const Matrix& grad_logits, double lr) {
    const std::size_t batch = instances.size();
    Matrix grad_hidden;
    if (model.hidden > 0) {
        grad_hidden = Matrix(batch, model.hidden);
        for (std::size_t b = 0; b < batch; ++b) {
            const Head& head = model.heads[heads[b]];
            for (std::size_t j = 0; j < model.hidden; ++j) {
                if (fwd.hidden(b, j) == 0.0) continue;  // ReLU gate
                double g = 0.0;
                for (std::size_t k = 0; k < model.classes; ++k) {
                    g += head.weights(j, k) * grad_logits(b, k);
                }
                grad_hidden(b, j) = g;
            }
        }
    }
    for (std::size_t b = 0; b < batch; ++b) {
        Head& head = model.heads[heads[b]];
        const auto gz = grad_logits.row(b);
        for (std::size_t k = 0; k < model.classes; ++k) head.bias[k] -= lr * gz[k];
        if (model.hidden > 0) {
            for (std::size_t j = 0; j < model.hidden; ++j) {
                const double h = fwd.hidden(b, j);
                if (h == 0.0) continue;
                for (std::size_t k = 0; k < model.classes; ++k) {
                    head.weights(j, k) -= lr * h * gz[k];
                }
            }
        } else {
            for (const auto& entry : features.row(instances[b])) {
                for (std::size_t k = 0; k < model.classes; ++k) {
                    head.weights(entry.index, k) -= lr * entry.value * gz[k];
                }
            }
        }
    }
    if (model.hidden > 0) {
        for (std::size_t b = 0; b < batch; ++b) {
            const auto gh = grad_hidden.row(b);
            for (std::size_t j = 0; j < model.hidden; ++j) {
                model.encoder_bias[j] -= lr * gh[j];
            }
            for (const auto& entry : features.row(instances[b])) {
                for (std::size_t j = 0; j < model.hidden; ++j) {
                    model.encoder_weights(entry.index, j) -= lr * entry.value * gh[j];
                }
            }
        }
    }
}

Matrix gather_rows(const Matrix& source, std::span<const std::size_t> rows) {
    Matrix out(rows.size(), source.cols());
    for (std::size_t b = 0; b < rows.size(); ++b) {
        const auto src = source.row(rows[b]);
        std::copy(src.begin(), src.end(), out.row(b).begin());
    }
    return out;
}

}  // namespace

double TrainConfig::resolved_learning_rate() const {
    if (learning_rate > 0.0) return learning_rate;
    return hidden > 0 ? 5e-3 : 5e-2;
}

void TrainConfig::validate() const {
    if (learning_rate < 0.0) throw ValidationError("learning rate must be nonnegative");
    if (batch_size == 0) throw ValidationError("batch size must be positive");
}

Model train(const MethodTarget& target, const FeatureSet& features, const TrainConfig& config,
            const LabelSpace& space) {
    config.validate();
    const TrainingPlan plan = make_plan(config.method, target, features.size(), space);

    Model model;
    model.kind = space.kind();
    model.input_dim = features.dims();
    model.hidden = config.hidden;
    model.classes = space.size();
    if (config.method == Method::SLMV) {
        model.role = HeadRole::SoftMv;
    } else if (config.method == Method::AE || config.method == Method::AEh) {
        model.role = HeadRole::PerAnnotator;
        model.ensemble_mode =
            config.method == Method::AE ? EnsembleMode::Mean : EnsembleMode::Hard;
        model.annotators = plan.annotators;
    } else {
        model.role = HeadRole::Single;
    }

    std::mt19937_64 rng(config.seed);
    if (config.hidden > 0) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(features.dims()));
        std::uniform_real_distribution<double> uniform(-bound, bound);
        model.encoder_weights = Matrix(features.dims(), config.hidden);
        for (double& w : model.encoder_weights.flat()) w = uniform(rng);
        model.encoder_bias.assign(config.hidden, 0.0);
    }
    model.heads.resize(plan.head_count);
    for (auto& head : model.heads) {
        head.weights = Matrix(model.head_input_dim(), model.classes);
        head.bias.assign(model.classes, 0.0);
    }

    const double lr = config.resolved_learning_rate();
    std::vector<std::size_t> order(plan.instances.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<std::size_t> batch_instances;
    std::vector<std::size_t> batch_heads;
    std::vector<LabelSet> batch_labels;
    std::vector<double> batch_weights;
    std::vector<std::vector<LabelSet>> batch_groups;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            batch_instances.clear();
            batch_heads.clear();
            for (std::size_t p = start; p < end; ++p) {
                batch_instances.push_back(plan.instances[order[p]]);
                batch_heads.push_back(plan.heads[order[p]]);
            }

            double value = 0.0;
            switch (plan.family) {
                case LossFamily::HardCE: {
                    batch_labels.clear();
                    batch_weights.clear();
                    for (std::size_t p = start; p < end; ++p) {
                        batch_labels.push_back(plan.hard_labels[order[p]]);
                        batch_weights.push_back(plan.weights[order[p]]);
                    }
                    const BatchForward fwd =
                        forward_batch(model, features, batch_instances, batch_heads);
                    const Matrix targets = indicator_rows(batch_labels, model.classes);
                    LossValueGrad loss =
                        ce_loss(fwd.logits, model.kind, targets, batch_weights);
                    value = loss.value;
                    apply_batch_update(model, features, batch_instances, batch_heads, fwd,
                                       loss.grad, lr);
                    break;
                }
                case LossFamily::SoftCE:
                case LossFamily::Jsd:
                case LossFamily::SmF1:
                case LossFamily::SMacroF1: {
                    const BatchForward fwd =
                        forward_batch(model, features, batch_instances, batch_heads);
                    const Matrix targets = gather_rows(plan.soft_rows, batch_instances);
                    LossValueGrad loss;
                    if (plan.family == LossFamily::SoftCE) {
                        loss = soft_ce_loss(fwd.logits, model.kind, targets);
                    } else if (plan.family == LossFamily::Jsd) {
                        loss = jsd_loss(fwd.logits, model.kind, targets);
                    } else if (plan.family == LossFamily::SmF1) {
                        loss = smf1_loss(fwd.logits, model.kind, targets);
                    } else {
                        loss = smacro_f1_loss(fwd.logits, model.kind, targets);
                    }
                    value = loss.value;
                    apply_batch_update(model, features, batch_instances, batch_heads, fwd,
                                       loss.grad, lr);
                    break;
                }
                case LossFamily::LossAgg: {
                    batch_groups.clear();
                    for (std::size_t p = start; p < end; ++p) {
                        batch_groups.push_back(plan.groups[plan.instances[order[p]]]);
                    }
                    const BatchForward fwd =
                        forward_batch(model, features, batch_instances, batch_heads);
                    LossValueGrad loss = la_loss(fwd.logits, model.kind, batch_groups,
                                                 config.method == Method::LAmin
                                                     ? LossAggregation::Min
                                                     : LossAggregation::Max);
                    value = loss.value;
                    apply_batch_update(model, features, batch_instances, batch_heads, fwd,
                                       loss.grad, lr);
                    break;
                }
                case LossFamily::Slmv: {
                    const std::vector<std::size_t> soft_heads(batch_instances.size(), 0);
                    const std::vector<std::size_t> hard_heads(batch_instances.size(), 1);
                    const BatchForward soft_fwd =
                        forward_batch(model, features, batch_instances, soft_heads);
                    const BatchForward hard_fwd =
                        forward_batch(model, features, batch_instances, hard_heads);
                    const Matrix soft_targets = gather_rows(plan.soft_rows, batch_instances);
                    const Matrix hard_targets = gather_rows(plan.hard_rows, batch_instances);
                    SlmvValueGrad loss = slmv_loss(soft_fwd.logits, hard_fwd.logits,
                                                   model.kind, soft_targets, hard_targets);
                    value = loss.value;
                    apply_batch_update(model, features, batch_instances, soft_heads, soft_fwd,
                                       loss.soft_grad, lr);
                    apply_batch_update(model, features, batch_instances, hard_heads, hard_fwd,
                                       loss.hard_grad, lr);
                    break;
                }
            }
            if (!std::isfinite(value)) {
                throw NumericalError(
                    "non-finite loss for method " + std::string(method_name(config.method)) +
                    " at epoch " + std::to_string(epoch) + ", batch offset " +
                    std::to_string(start));
            }
        }
    }
    return model;
}

MetricReport evaluate_model(const Model& model, const FeatureSet& features,
                            const JudgementMatrix& reference) {
    return compute_report(reference, predict(model, features));
}

}  // namespace hlv
