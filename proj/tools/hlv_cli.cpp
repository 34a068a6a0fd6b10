// hlv: train and evaluate classifiers under human label variation, and run
// the accompanying metric analyses. One subcommand per run; every run with
// an --out writes a <out>.run.json record sufficient to reproduce it.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hlv/aggregation.hpp"
#include "hlv/analysis.hpp"
#include "hlv/io.hpp"
#include "hlv/metrics.hpp"
#include "hlv/trainer.hpp"
#include "hlv/version.hpp"

namespace {

using nlohmann::json;

constexpr double kBoundTolerance = 1e-12;

struct RunRecord {
    std::string command;
    json arguments = json::object();
    json inputs = json::object();
    std::vector<std::string> outputs;

    void input(const std::string& path) { inputs[path] = hlv::file_digest(path); }

    void write(const std::string& out_path) const {
        json j;
        j["tool"] = "hlv";
        j["version"] = std::string(hlv::kVersion);
        j["command"] = command;
        j["arguments"] = arguments;
        j["inputs"] = inputs;
        j["outputs"] = outputs;
        const std::string path = out_path + ".run.json";
        std::ofstream out(path);
        if (!out) throw hlv::ValidationError("cannot write run record '" + path + "'");
        out << j.dump(2) << '\n';
    }
};

hlv::Method parse_method_or_throw(const std::string& name) {
    const auto method = hlv::parse_method(name);
    if (!method) {
        std::string valid;
        for (hlv::Method m : hlv::all_methods()) {
            if (!valid.empty()) valid += ", ";
            valid += hlv::method_name(m);
        }
        throw hlv::ValidationError("unknown method '" + name + "' (expected one of: " + valid +
                                   ")");
    }
    return *method;
}

struct DatasetOptions {
    std::string annotations;
    std::string manifest;
    std::string features;
    std::string text_field;
    std::size_t feature_dims = hlv::kDefaultHashDims;
};

struct LoadedDataset {
    hlv::LabelSpace space;
    hlv::AnnotationSet annotations;
    std::optional<hlv::FeatureSet> features;
    std::vector<std::string> ids;
};

LoadedDataset load_dataset(const DatasetOptions& options, bool need_features,
                           RunRecord& record) {
    record.input(options.manifest);
    record.input(options.annotations);
    hlv::LabelSpace space = hlv::read_label_space(options.manifest);

    std::optional<hlv::FeatureSet> features;
    std::optional<hlv::AnnotationSet> annotations;
    if (!options.text_field.empty()) {
        auto with_text =
            hlv::read_annotations_with_text(options.annotations, space, options.text_field);
        features = hlv::featurize_text(with_text.texts, options.feature_dims);
        annotations = std::move(with_text.annotations);
    } else {
        annotations = hlv::read_annotations(options.annotations, space);
    }

    std::vector<std::string> ids;
    ids.reserve(annotations->size());
    for (const auto& instance : annotations->instances()) ids.push_back(instance.id);

    if (!options.features.empty()) {
        record.input(options.features);
        features = hlv::align_features(hlv::read_features(options.features), ids);
    }
    if (need_features && !features.has_value()) {
        throw hlv::ValidationError("this run needs --features or --text-field");
    }
    return {std::move(space), std::move(*annotations), std::move(features), std::move(ids)};
}

int run_train(const DatasetOptions& dataset, const std::string& method_name,
              hlv::TrainConfig config, double lr_flag, const std::string& out) {
    RunRecord record;
    record.command = "train";
    config.method = parse_method_or_throw(method_name);
    if (lr_flag > 0.0) config.learning_rate = lr_flag;

    LoadedDataset data = load_dataset(dataset, /*need_features=*/true, record);
    if (data.space.kind() == hlv::TaskKind::Multilabel &&
        !hlv::method_supports_multilabel(config.method)) {
        throw hlv::ValidationError(std::string(hlv::method_name(config.method)) +
                                   " supports single-label (multiclass) tasks only");
    }
    if (hlv::method_needs_annotators(config.method) &&
        !data.annotations.has_annotator_ids()) {
        throw hlv::ValidationError(std::string(hlv::method_name(config.method)) +
                                   " requires an annotator id on every record");
    }

    const hlv::MethodTarget target =
        hlv::build_target(config.method, data.annotations, data.space);
    const hlv::Model model = hlv::train(target, *data.features, config, data.space);
    hlv::save_model(model, out);

    record.arguments = {{"method", method_name},
                        {"annotations", dataset.annotations},
                        {"manifest", dataset.manifest},
                        {"features", dataset.features},
                        {"text_field", dataset.text_field},
                        {"feature_dims", dataset.feature_dims},
                        {"learning_rate", config.resolved_learning_rate()},
                        {"batch_size", config.batch_size},
                        {"epochs", config.epochs},
                        {"hidden", config.hidden},
                        {"seed", config.seed}};
    record.outputs = {out};
    record.write(out);
    return 0;
}

int run_evaluate(const DatasetOptions& dataset, const std::string& model_path,
                 const std::string& predictions_path, const std::string& out) {
    RunRecord record;
    record.command = "evaluate";
    if (model_path.empty() == predictions_path.empty()) {
        throw hlv::ValidationError("evaluate needs exactly one of --model or --predictions");
    }
    LoadedDataset data = load_dataset(dataset, /*need_features=*/!model_path.empty(), record);
    const hlv::JudgementMatrix reference =
        hlv::build_judgements(data.annotations, data.space);

    std::optional<hlv::JudgementMatrix> predicted;
    if (!model_path.empty()) {
        record.input(model_path);
        const hlv::Model model = hlv::load_model(model_path);
        predicted = hlv::predict(model, *data.features);
    } else {
        record.input(predictions_path);
        predicted = hlv::align_judgements(hlv::read_judgements(predictions_path, data.space),
                                          data.ids);
    }

    hlv::MetricReport report = hlv::compute_report(reference, *predicted);
    std::ofstream file(out);
    if (!file) throw hlv::ValidationError("cannot write report '" + out + "'");
    file << report.to_json() << '\n';

    record.arguments = {{"annotations", dataset.annotations},
                        {"manifest", dataset.manifest},
                        {"model", model_path},
                        {"predictions", predictions_path},
                        {"features", dataset.features},
                        {"text_field", dataset.text_field},
                        {"feature_dims", dataset.feature_dims}};
    record.outputs = {out};
    record.write(out);
    return 0;
}

int run_study(const hlv::StudyConfig& config, const std::string& out) {
    const hlv::StudyResult result = hlv::dirichlet_metric_correlations(config);
    std::ofstream file(out);
    if (!file) throw hlv::ValidationError("cannot write study output '" + out + "'");
    file << "alpha,beta,K,pair,r\n";
    for (const auto& entry : result.correlations) {
        file << hlv::format_sig9(config.alpha) << ',' << hlv::format_sig9(config.beta) << ','
             << config.classes << ',' << entry.first << '-' << entry.second << ','
             << hlv::format_sig9(entry.r) << '\n';
    }
    if (result.dropped_entropy_samples > 0) {
        std::cerr << "note: " << result.dropped_entropy_samples
                  << " samples had undefined entropy correlation and were dropped from the"
                     " E-involving pairs\n";
    }
    RunRecord record;
    record.command = "study";
    record.arguments = {{"K", config.classes},     {"N", config.examples},
                        {"B", config.samples},     {"alpha", config.alpha},
                        {"beta", config.beta},     {"seed", config.seed},
                        {"dropped_entropy_samples", result.dropped_entropy_samples}};
    record.outputs = {out};
    record.write(out);
    return 0;
}

int run_curve(std::size_t steps, const std::string& out) {
    const auto points = hlv::sa_pojsd_curve(steps);
    std::ofstream file(out);
    if (!file) throw hlv::ValidationError("cannot write curve output '" + out + "'");
    file << "q,soft_accuracy,po_jsd\n";
    for (const auto& point : points) {
        file << hlv::format_sig9(point.q) << ',' << hlv::format_sig9(point.soft_accuracy)
             << ',' << hlv::format_sig9(point.po_jsd) << '\n';
    }
    RunRecord record;
    record.command = "curve";
    record.arguments = {{"steps", steps}};
    record.outputs = {out};
    record.write(out);
    return 0;
}

int run_verify_bound(std::size_t trials, std::uint64_t seed, const std::string& out) {
    const std::vector<std::size_t> example_grid = {1, 10, 100};
    const std::vector<std::size_t> class_grid = {2, 3, 10};
    const std::size_t cells = example_grid.size() * class_grid.size();
    const std::size_t per_cell = (trials + cells - 1) / cells;

    json cell_results = json::array();
    double worst = -1.0;
    std::size_t cell_index = 0;
    for (std::size_t examples : example_grid) {
        for (std::size_t classes : class_grid) {
            const double violation =
                hlv::max_bound_violation(per_cell, examples, classes, seed + cell_index);
            worst = std::max(worst, violation);
            cell_results.push_back({{"N", examples},
                                    {"K", classes},
                                    {"trials", per_cell},
                                    {"max_violation", violation}});
            ++cell_index;
        }
    }
    const bool ok = worst <= kBoundTolerance;
    std::printf("max(soft_accuracy - po_jsd) over %zu pairs: %s (%s)\n", per_cell * cells,
                hlv::format_sig9(worst).c_str(), ok ? "within tolerance" : "VIOLATION");
    if (!out.empty()) {
        json j;
        j["trials"] = per_cell * cells;
        j["seed"] = seed;
        j["max_violation"] = worst;
        j["tolerance"] = kBoundTolerance;
        j["cells"] = cell_results;
        std::ofstream file(out);
        if (!file) throw hlv::ValidationError("cannot write bound report '" + out + "'");
        file << j.dump(2) << '\n';
        RunRecord record;
        record.command = "verify-bound";
        record.arguments = {{"trials", trials}, {"seed", seed}};
        record.outputs = {out};
        record.write(out);
    }
    return ok ? 0 : 2;
}

int run_rank(const std::string& preferences_path, const std::string& methods_flag,
             bool exclusive, const std::string& out) {
    RunRecord record;
    record.command = "rank";
    record.input(preferences_path);
    const auto records = hlv::read_preferences(preferences_path);

    std::vector<std::string> methods;
    if (!methods_flag.empty()) {
        std::string name;
        for (char c : methods_flag + ",") {
            if (c == ',') {
                if (!name.empty()) methods.push_back(name);
                name.clear();
            } else {
                name.push_back(c);
            }
        }
    } else {
        // method universe discovered from the file, first-appearance order
        for (const auto& r : records) {
            for (const auto& name : {r.first, r.second}) {
                if (std::find(methods.begin(), methods.end(), name) == methods.end()) {
                    methods.push_back(name);
                }
            }
        }
    }

    const hlv::ComparisonGraph graph =
        hlv::wins_from_preferences(methods, records, exclusive);
    const std::vector<double> scores = hlv::rank_centrality(graph);

    json j = json::object();
    for (std::size_t i = 0; i < methods.size(); ++i) {
        j[methods[i]] = hlv::round_sig9(scores[i]);
    }
    std::ofstream file(out);
    if (!file) throw hlv::ValidationError("cannot write scores '" + out + "'");
    file << j.dump(2) << '\n';

    record.arguments = {{"preferences", preferences_path},
                        {"methods", methods},
                        {"exclusive_denominator", exclusive}};
    record.outputs = {out};
    record.write(out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Training and evaluation under human label variation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from a key=value file (flags win)");
    app.set_version_flag("--version", std::string(hlv::kVersion));

    DatasetOptions dataset;
    hlv::TrainConfig train_config;
    double lr_flag = 0.0;
    std::string method;
    std::string out;
    std::string model_path;
    std::string predictions_path;

    auto add_dataset_flags = [&](CLI::App* cmd, bool with_features) {
        cmd->add_option("--annotations", dataset.annotations,
                        "Line-delimited annotation records")
            ->required();
        cmd->add_option("--manifest", dataset.manifest,
                        "Dataset manifest (task + ordered class names)")
            ->required();
        if (with_features) {
            auto* features = cmd->add_option("--features", dataset.features,
                                             "Line-delimited dense feature rows");
            auto* text = cmd->add_option("--text-field", dataset.text_field,
                                         "Annotation field to featurize by hashing");
            features->excludes(text);
            cmd->add_option("--feature-dims", dataset.feature_dims,
                            "Hashed feature dimension (power of two)")
                ->capture_default_str();
        }
    };

    CLI::App* train = app.add_subcommand("train", "Train a model with an HLV method");
    train->add_option("--method", method, "Training method name")->required();
    add_dataset_flags(train, true);
    train->add_option("--lr", lr_flag, "Learning rate (default 5e-2 linear, 5e-3 hidden)");
    train->add_option("--batch-size", train_config.batch_size, "Mini-batch size")
        ->capture_default_str();
    train->add_option("--epochs", train_config.epochs, "Training epochs")
        ->capture_default_str();
    train->add_option("--seed", train_config.seed, "RNG seed")->capture_default_str();
    train->add_option("--hidden", train_config.hidden, "Hidden layer width (0 = linear)")
        ->capture_default_str();
    train->add_option("--out", out, "Output model path")->required();

    CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions against judgements");
    evaluate->add_option("--model", model_path, "Trained model to run");
    evaluate->add_option("--predictions", predictions_path,
                         "Line-delimited judgement predictions");
    add_dataset_flags(evaluate, true);
    evaluate->add_option("--out", out, "Output metric report path")->required();

    hlv::StudyConfig study_config;
    CLI::App* study = app.add_subcommand("study", "Metric correlations on Dirichlet samples");
    study->add_option("--K", study_config.classes, "Number of classes")->capture_default_str();
    study->add_option("--N", study_config.examples, "Examples per matrix")
        ->capture_default_str();
    study->add_option("--B", study_config.samples, "Sampled matrix pairs")
        ->capture_default_str();
    study->add_option("--alpha", study_config.alpha, "Dirichlet concentration for P")
        ->capture_default_str();
    study->add_option("--beta", study_config.beta, "Dirichlet concentration for Q")
        ->capture_default_str();
    study->add_option("--seed", study_config.seed, "RNG seed")->capture_default_str();
    study->add_option("--out", out, "Output CSV path")->required();

    std::size_t steps = 101;
    CLI::App* curve = app.add_subcommand("curve", "Soft accuracy vs PO-JSD curve");
    curve->add_option("--steps", steps, "Grid points over [0,1]")->capture_default_str();
    curve->add_option("--out", out, "Output CSV path")->required();

    std::size_t trials = 10000;
    std::uint64_t bound_seed = 0;
    CLI::App* verify =
        app.add_subcommand("verify-bound", "Check soft accuracy <= PO-JSD on random pairs");
    verify->add_option("--trials", trials, "Total random pairs across the (N, K) grid")
        ->capture_default_str();
    verify->add_option("--seed", bound_seed, "RNG seed")->capture_default_str();
    verify->add_option("--out", out, "Optional JSON report path");

    std::string preferences_path;
    std::string methods_flag;
    bool exclusive = false;
    CLI::App* rank = app.add_subcommand("rank", "Rank methods from pairwise preferences");
    rank->add_option("--preferences", preferences_path,
                     "Line-delimited pairwise preference records")
        ->required();
    rank->add_option("--methods", methods_flag,
                     "Comma-separated method universe (default: names in the file)");
    rank->add_flag("--exclusive-denominator", exclusive,
                   "Count only decisive judgements in the win denominators");
    rank->add_option("--out", out, "Output scores path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train->parsed()) return run_train(dataset, method, train_config, lr_flag, out);
        if (evaluate->parsed()) return run_evaluate(dataset, model_path, predictions_path, out);
        if (study->parsed()) return run_study(study_config, out);
        if (curve->parsed()) return run_curve(steps, out);
        if (verify->parsed()) return run_verify_bound(trials, bound_seed, out);
        if (rank->parsed()) return run_rank(preferences_path, methods_flag, exclusive, out);
    } catch (const hlv::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
