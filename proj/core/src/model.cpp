#include "hlv/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hlv/objectives.hpp"
#include "hlv/version.hpp"

namespace hlv {

namespace {

constexpr int kModelFormatVersion = 1;

void check_model(const Model& model) {
    if (model.classes < 2) throw ValidationError("model needs at least 2 classes");
    if (model.input_dim == 0) throw ValidationError("model input dimension is zero");
    if (model.heads.empty()) throw ValidationError("model has no output heads");
    if (model.hidden > 0) {
        if (model.encoder_weights.rows() != model.input_dim ||
            model.encoder_weights.cols() != model.hidden ||
            model.encoder_bias.size() != model.hidden) {
            throw ValidationError("encoder parameter shapes are inconsistent");
        }
    }
    for (const auto& head : model.heads) {
        if (head.weights.rows() != model.head_input_dim() ||
            head.weights.cols() != model.classes || head.bias.size() != model.classes) {
            throw ValidationError("head parameter shapes are inconsistent");
        }
    }
    if (model.role == HeadRole::PerAnnotator) {
        if (model.annotators.size() != model.heads.size()) {
            throw ValidationError("per-annotator model head/annotator counts differ");
        }
        if (!model.ensemble_mode.has_value()) {
            throw ValidationError("per-annotator model is missing its ensemble mode");
        }
    }
    for (double v : model.encoder_weights.flat()) {
        if (!std::isfinite(v)) throw ValidationError("non-finite encoder parameter");
    }
    for (const auto& head : model.heads) {
        for (double v : head.weights.flat()) {
            if (!std::isfinite(v)) throw ValidationError("non-finite head parameter");
        }
    }
}

std::vector<double> encode_row(const Model& model, std::span<const FeatureEntry> x) {
    std::vector<double> hidden(model.hidden, 0.0);
    for (const auto& entry : x) {
        for (std::size_t j = 0; j < model.hidden; ++j) {
            hidden[j] += entry.value * model.encoder_weights(entry.index, j);
        }
    }
    for (std::size_t j = 0; j < model.hidden; ++j) {
        hidden[j] = std::max(0.0, hidden[j] + model.encoder_bias[j]);
    }
    return hidden;
}

std::string role_name(HeadRole role) {
    switch (role) {
        case HeadRole::Single: return "single";
        case HeadRole::SoftMv: return "soft_mv";
        case HeadRole::PerAnnotator: return "per_annotator";
    }
    return "single";
}

HeadRole role_from_name(std::string_view name) {
    if (name == "single") return HeadRole::Single;
    if (name == "soft_mv") return HeadRole::SoftMv;
    if (name == "per_annotator") return HeadRole::PerAnnotator;
    throw ValidationError("unknown head role '" + std::string(name) + "'");
}

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = std::vector<double>(m.flat().begin(), m.flat().end());
    return j;
}

Matrix matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != rows * cols) {
        throw ValidationError("matrix data length does not match its shape");
    }
    Matrix m(rows, cols);
    std::copy(data.begin(), data.end(), m.flat().begin());
    return m;
}

}  // namespace

Matrix head_logits(const Model& model, const FeatureSet& features, std::size_t head) {
    if (head >= model.heads.size()) throw ValidationError("head index out of range");
    if (features.dims() != model.input_dim) {
        throw ValidationError("feature dimension " + std::to_string(features.dims()) +
                              " does not match model input " +
                              std::to_string(model.input_dim));
    }
    const Head& h = model.heads[head];
    Matrix logits(features.size(), model.classes);
    for (std::size_t i = 0; i < features.size(); ++i) {
        auto out = logits.row(i);
        std::copy(h.bias.begin(), h.bias.end(), out.begin());
        if (model.hidden > 0) {
            const std::vector<double> hidden = encode_row(model, features.row(i));
            for (std::size_t j = 0; j < hidden.size(); ++j) {
                if (hidden[j] == 0.0) continue;
                for (std::size_t k = 0; k < model.classes; ++k) {
                    out[k] += hidden[j] * h.weights(j, k);
                }
            }
        } else {
            for (const auto& entry : features.row(i)) {
                for (std::size_t k = 0; k < model.classes; ++k) {
                    out[k] += entry.value * h.weights(entry.index, k);
                }
            }
        }
    }
    return logits;
}

JudgementMatrix predict_head(const Model& model, const FeatureSet& features, std::size_t head) {
    return {probabilities(head_logits(model, features, head), model.kind), model.kind};
}

JudgementMatrix predict(const Model& model, const FeatureSet& features) {
    check_model(model);
    if (model.role == HeadRole::PerAnnotator) {
        std::vector<JudgementMatrix> per_annotator;
        per_annotator.reserve(model.heads.size());
        for (std::size_t h = 0; h < model.heads.size(); ++h) {
            per_annotator.push_back(predict_head(model, features, h));
        }
        return ensemble(per_annotator, *model.ensemble_mode);
    }
    // Single-head models and SLMV (whose first head carries the soft labels).
    return predict_head(model, features, 0);
}

JudgementMatrix ensemble(std::span<const JudgementMatrix> predictions, EnsembleMode mode) {
    if (predictions.empty()) throw ValidationError("cannot ensemble zero predictions");
    const TaskKind kind = predictions.front().kind();
    const std::size_t rows = predictions.front().examples();
    const std::size_t cols = predictions.front().classes();
    for (const auto& prediction : predictions) {
        if (prediction.kind() != kind || prediction.examples() != rows ||
            prediction.classes() != cols) {
            throw ValidationError("ensemble inputs have mismatched shapes or kinds");
        }
    }
    Matrix sum(rows, cols);
    for (const auto& prediction : predictions) {
        const Matrix values =
            mode == EnsembleMode::Mean ? prediction.values() : harden(prediction).values();
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t k = 0; k < cols; ++k) sum(i, k) += values(i, k);
        }
    }
    const double count = static_cast<double>(predictions.size());
    for (double& v : sum.flat()) v /= count;
    return {std::move(sum), kind};
}

std::string model_to_json(const Model& model) {
    check_model(model);
    nlohmann::json j;
    j["format"] = "hlv-model";
    j["format_version"] = kModelFormatVersion;
    j["tool_version"] = std::string(kVersion);
    j["task"] = std::string(to_string(model.kind));
    j["input_dim"] = model.input_dim;
    j["hidden"] = model.hidden;
    j["classes"] = model.classes;
    j["role"] = role_name(model.role);
    if (model.ensemble_mode.has_value()) {
        j["ensemble"] = *model.ensemble_mode == EnsembleMode::Mean ? "mean" : "hard";
    }
    if (!model.annotators.empty()) j["annotators"] = model.annotators;
    if (model.hidden > 0) {
        j["encoder"] = {{"weights", matrix_to_json(model.encoder_weights)},
                        {"bias", model.encoder_bias}};
    }
    j["heads"] = nlohmann::json::array();
    for (const auto& head : model.heads) {
        j["heads"].push_back({{"weights", matrix_to_json(head.weights)}, {"bias", head.bias}});
    }
    return j.dump(2);
}

Model model_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed model file: ") + e.what());
    }
    if (j.value("format", "") != "hlv-model") {
        throw ValidationError("not a model file (missing format marker)");
    }
    if (j.at("format_version").get<int>() != kModelFormatVersion) {
        throw ValidationError("unsupported model format version");
    }
    Model model;
    model.kind = task_kind_from_string(j.at("task").get<std::string>());
    model.input_dim = j.at("input_dim").get<std::size_t>();
    model.hidden = j.at("hidden").get<std::size_t>();
    model.classes = j.at("classes").get<std::size_t>();
    model.role = role_from_name(j.at("role").get<std::string>());
    if (j.contains("ensemble")) {
        const auto mode = j.at("ensemble").get<std::string>();
        if (mode != "mean" && mode != "hard") {
            throw ValidationError("unknown ensemble mode '" + mode + "'");
        }
        model.ensemble_mode = mode == "mean" ? EnsembleMode::Mean : EnsembleMode::Hard;
    }
    if (j.contains("annotators")) {
        model.annotators = j.at("annotators").get<std::vector<std::string>>();
    }
    if (model.hidden > 0) {
        model.encoder_weights = matrix_from_json(j.at("encoder").at("weights"));
        model.encoder_bias = j.at("encoder").at("bias").get<std::vector<double>>();
    }
    for (const auto& head : j.at("heads")) {
        model.heads.push_back(
            {matrix_from_json(head.at("weights")), head.at("bias").get<std::vector<double>>()});
    }
    check_model(model);
    return model;
}

void save_model(const Model& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
    out << model_to_json(model) << '\n';
    if (!out) throw ValidationError("failed writing model to '" + path.string() + "'");
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file '" + path.string() + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

}  // namespace hlv
