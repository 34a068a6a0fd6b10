#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hlv/features.hpp"
#include "hlv/judgement.hpp"
#include "hlv/types.hpp"

namespace hlv {

enum class HeadRole { Single, SoftMv, PerAnnotator };
enum class EnsembleMode { Mean, Hard };

struct Head {
    Matrix weights;            // input_dim (or hidden) × classes
    std::vector<double> bias;  // classes
};

/// Shared optional one-hidden-layer ReLU encoder plus one or more affine
/// output heads. hidden == 0 means heads read the raw features.
struct Model {
    TaskKind kind = TaskKind::Multiclass;
    std::size_t input_dim = 0;
    std::size_t hidden = 0;
    std::size_t classes = 0;
    HeadRole role = HeadRole::Single;
    std::optional<EnsembleMode> ensemble_mode;  // PerAnnotator models only
    std::vector<std::string> annotators;        // PerAnnotator models only
    Matrix encoder_weights;                     // input_dim × hidden
    std::vector<double> encoder_bias;           // hidden
    std::vector<Head> heads;

    std::size_t head_input_dim() const noexcept { return hidden > 0 ? hidden : input_dim; }
};

/// Raw logits of one head for every feature row.
Matrix head_logits(const Model& model, const FeatureSet& features, std::size_t head);

/// Judgements from one head: softmax rows (multiclass) or sigmoid cells
/// (multilabel).
JudgementMatrix predict_head(const Model& model, const FeatureSet& features, std::size_t head);

/// Model predictions as judgements. Multi-head models resolve to the soft
/// head (SoftMv) or the configured annotator ensemble (PerAnnotator).
JudgementMatrix predict(const Model& model, const FeatureSet& features);

/// Combine per-annotator judgement matrices: Mean averages cells, Hard
/// averages hardened cells (the fraction of annotators predicting a class).
JudgementMatrix ensemble(std::span<const JudgementMatrix> predictions, EnsembleMode mode);

/// Versioned JSON parameter dump; parameters round-trip exactly.
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

std::string model_to_json(const Model& model);
Model model_from_json(std::string_view text);

}  // namespace hlv
