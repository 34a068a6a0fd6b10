#pragma once

#include <cstdint>

#include "hlv/aggregation.hpp"
#include "hlv/features.hpp"
#include "hlv/metrics.hpp"
#include "hlv/model.hpp"

namespace hlv {

struct TrainConfig {
    Method method = Method::SL;
    double learning_rate = 0.0;  // 0 picks the default for the architecture
    std::size_t batch_size = 32;
    std::size_t epochs = 10;
    std::uint64_t seed = 0;
    std::size_t hidden = 0;  // 0 = linear model

    /// 5e-2 for linear models, 5e-3 with a hidden layer, unless set.
    double resolved_learning_rate() const;

    void validate() const;
};

/// Mini-batch SGD with the method's loss; deterministic given the seed
/// (initialization and per-epoch shuffles both derive from it). Throws
/// NumericalError with diagnostics if the loss turns non-finite.
Model train(const MethodTarget& target, const FeatureSet& features, const TrainConfig& config,
            const LabelSpace& space);

/// predict() + compute_report() + selection score.
MetricReport evaluate_model(const Model& model, const FeatureSet& features,
                            const JudgementMatrix& reference);

}  // namespace hlv
