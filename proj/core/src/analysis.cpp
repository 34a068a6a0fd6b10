#include "hlv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "hlv/metrics.hpp"
#include "internal/stats.hpp"

namespace hlv {

namespace {

/// splitmix64 of (seed, index): decorrelated per-sample substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// N×K matrix with rows drawn from a symmetric Dirichlet(concentration).
Matrix sample_dirichlet_rows(std::size_t rows, std::size_t cols, double concentration,
                             std::mt19937_64& rng) {
    std::gamma_distribution<double> gamma(concentration, 1.0);
    Matrix values(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < cols; ++k) {
            values(i, k) = gamma(rng);
            sum += values(i, k);
        }
        if (sum <= 0.0) {
            // All draws underflowed; fall back to a uniform row.
            for (std::size_t k = 0; k < cols; ++k) {
                values(i, k) = 1.0 / static_cast<double>(cols);
            }
        } else {
            for (std::size_t k = 0; k < cols; ++k) values(i, k) /= sum;
        }
    }
    return values;
}

double pearson_or_throw(std::span<const double> xs, std::span<const double> ys,
                        const char* what) {
    const auto r = detail::pearson_or_undefined(xs, ys);
    if (!r) {
        throw NumericalError(std::string(what) + ": zero variance, correlation undefined");
    }
    return *r;
}

}  // namespace

void StudyConfig::validate() const {
    if (classes < 2) throw ValidationError("study needs at least 2 classes");
    if (examples == 0) throw ValidationError("study needs at least 1 example per matrix");
    if (samples < 3) throw ValidationError("study needs at least 3 sampled pairs");
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw ValidationError("Dirichlet concentrations must be positive");
    }
}

double StudyResult::at(std::string_view pair) const {
    for (const auto& entry : correlations) {
        if (entry.first + "-" + entry.second == pair) return entry.r;
    }
    throw ValidationError("no correlation for pair '" + std::string(pair) + "'");
}

StudyResult dirichlet_metric_correlations(const StudyConfig& config) {
    config.validate();
    std::vector<double> accuracy(config.samples);
    std::vector<double> pojsd(config.samples);
    std::vector<double> soft(config.samples);
    std::vector<double> entropy(config.samples);
    std::vector<bool> entropy_defined(config.samples, true);

    for (std::size_t b = 0; b < config.samples; ++b) {
        std::mt19937_64 rng(mix_seed(config.seed, b));
        JudgementMatrix p(
            sample_dirichlet_rows(config.examples, config.classes, config.alpha, rng),
            TaskKind::Multiclass);
        JudgementMatrix q(
            sample_dirichlet_rows(config.examples, config.classes, config.beta, rng),
            TaskKind::Multiclass);
        accuracy[b] = hard_accuracy(p, q);
        pojsd[b] = po_jsd(p, q);
        soft[b] = soft_accuracy(p, q);
        try {
            entropy[b] = entropy_correlation(p, q);
        } catch (const UndefinedMetricError&) {
            entropy[b] = 0.0;
            entropy_defined[b] = false;
        }
    }

    std::vector<double> entropy_kept;
    std::vector<double> accuracy_kept;
    std::vector<double> pojsd_kept;
    std::vector<double> soft_kept;
    for (std::size_t b = 0; b < config.samples; ++b) {
        if (!entropy_defined[b]) continue;
        entropy_kept.push_back(entropy[b]);
        accuracy_kept.push_back(accuracy[b]);
        pojsd_kept.push_back(pojsd[b]);
        soft_kept.push_back(soft[b]);
    }

    StudyResult result;
    result.config = config;
    result.dropped_entropy_samples = config.samples - entropy_kept.size();
    result.correlations = {
        {"A", "J", pearson_or_throw(accuracy, pojsd, "A-J")},
        {"A", "E", pearson_or_throw(accuracy_kept, entropy_kept, "A-E")},
        {"A", "S", pearson_or_throw(accuracy, soft, "A-S")},
        {"J", "E", pearson_or_throw(pojsd_kept, entropy_kept, "J-E")},
        {"J", "S", pearson_or_throw(pojsd, soft, "J-S")},
        {"E", "S", pearson_or_throw(entropy_kept, soft_kept, "E-S")},
    };
    return result;
}

double max_bound_violation(std::size_t trials, std::size_t examples, std::size_t classes,
                           std::uint64_t seed) {
    if (trials == 0) throw ValidationError("bound verification needs at least 1 trial");
    if (classes < 2) throw ValidationError("bound verification needs at least 2 classes");
    if (examples == 0) throw ValidationError("bound verification needs at least 1 example");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng(mix_seed(seed, t));
        // Spread the concentrations so the pairs cover sparse and dense rows.
        std::uniform_real_distribution<double> log_conc(std::log(0.05), std::log(20.0));
        const double alpha = std::exp(log_conc(rng));
        const double beta = std::exp(log_conc(rng));
        JudgementMatrix p(sample_dirichlet_rows(examples, classes, alpha, rng),
                          TaskKind::Multiclass);
        JudgementMatrix q(sample_dirichlet_rows(examples, classes, beta, rng),
                          TaskKind::Multiclass);
        worst = std::max(worst, soft_accuracy(p, q) - po_jsd(p, q));
    }
    return worst;
}

std::vector<CurvePoint> sa_pojsd_curve(std::size_t steps) {
    if (steps < 2) throw ValidationError("curve needs at least 2 steps");
    std::vector<CurvePoint> points;
    points.reserve(steps);
    for (std::size_t s = 0; s < steps; ++s) {
        const double q = static_cast<double>(s) / static_cast<double>(steps - 1);
        JudgementMatrix reference(Matrix::from_rows({{0.5, 0.5}}), TaskKind::Multiclass);
        JudgementMatrix predicted(Matrix::from_rows({{q, 1.0 - q}}), TaskKind::Multiclass);
        points.push_back(
            {q, soft_accuracy(reference, predicted), po_jsd(reference, predicted)});
    }
    return points;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw ValidationError("pearson: input lengths differ");
    }
    if (xs.size() < 3) throw ValidationError("pearson: need at least 3 points");
    return pearson_or_throw(xs, ys, "pearson");
}

double permutation_pvalue(std::span<const double> xs, std::span<const double> ys,
                          std::size_t permutations, std::uint64_t seed) {
    const double observed = std::abs(pearson(xs, ys));
    if (permutations == 0) throw ValidationError("permutation test needs permutations >= 1");
    std::mt19937_64 rng(seed);
    std::vector<double> shuffled(ys.begin(), ys.end());
    std::size_t hits = 0;
    for (std::size_t p = 0; p < permutations; ++p) {
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto r = detail::pearson_or_undefined(xs, shuffled);
        if (r && std::abs(*r) >= observed) ++hits;
    }
    return static_cast<double>(hits + 1) / static_cast<double>(permutations + 1);
}

ComparisonGraph::ComparisonGraph(std::vector<std::string> methods)
    : methods_(std::move(methods)),
      counts_(methods_.size(), methods_.size()),
      totals_(methods_.size(), methods_.size()) {
    if (methods_.size() < 2) {
        throw ValidationError("comparison graph needs at least 2 methods");
    }
}

void ComparisonGraph::add_judgement(std::size_t i, std::size_t j, int winner) {
    if (i >= size() || j >= size() || i == j) {
        throw ValidationError("invalid method pair in comparison graph");
    }
    totals_(i, j) += 1.0;
    totals_(j, i) += 1.0;
    if (winner == 0) counts_(j, i) += 1.0;  // i beat j: walk from j toward i
    if (winner == 1) counts_(i, j) += 1.0;
}

ComparisonGraph ComparisonGraph::from_matrices(std::vector<std::string> methods, Matrix counts,
                                               Matrix totals) {
    ComparisonGraph graph(std::move(methods));
    const std::size_t m = graph.size();
    if (counts.rows() != m || counts.cols() != m || totals.rows() != m || totals.cols() != m) {
        throw ValidationError("comparison matrices must be M x M");
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (counts(i, j) < 0.0 || totals(i, j) < 0.0) {
                throw ValidationError("comparison counts must be nonnegative");
            }
            if (i == j && (counts(i, j) != 0.0 || totals(i, j) != 0.0)) {
                throw ValidationError("comparison matrices must have zero diagonals");
            }
            if (counts(i, j) > totals(i, j)) {
                throw ValidationError("wins exceed judgement totals for a pair");
            }
            if (totals(i, j) != totals(j, i)) {
                throw ValidationError("judgement totals must be symmetric");
            }
        }
    }
    graph.counts_ = std::move(counts);
    graph.totals_ = std::move(totals);
    return graph;
}

std::vector<PreferenceRecord> read_preferences(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open preference file '" + path.string() + "'");
    std::vector<PreferenceRecord> records;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path.string() + ":" + std::to_string(line) +
                                  ": malformed JSON: " + e.what());
        }
        PreferenceRecord record;
        try {
            record.first = j.at("first").get<std::string>();
            record.second = j.at("second").get<std::string>();
            const auto choice = j.at("choice").get<std::string>();
            if (choice == "first") {
                record.choice = Preference::First;
            } else if (choice == "second") {
                record.choice = Preference::Second;
            } else if (choice == "both") {
                record.choice = Preference::Both;
            } else if (choice == "neither") {
                record.choice = Preference::Neither;
            } else {
                throw ValidationError(path.string() + ":" + std::to_string(line) +
                                      ": unknown choice '" + choice + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path.string() + ":" + std::to_string(line) +
                                  ": missing field: " + e.what());
        }
        records.push_back(std::move(record));
    }
    return records;
}

ComparisonGraph wins_from_preferences(std::vector<std::string> methods,
                                      std::span<const PreferenceRecord> records,
                                      bool exclusive_denominator) {
    ComparisonGraph graph(std::move(methods));
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < graph.methods().size(); ++i) {
        index.emplace(graph.methods()[i], i);
    }
    for (const auto& record : records) {
        const auto first = index.find(record.first);
        const auto second = index.find(record.second);
        if (first == index.end()) {
            throw ValidationError("unknown method name '" + record.first + "'");
        }
        if (second == index.end()) {
            throw ValidationError("unknown method name '" + record.second + "'");
        }
        if (first->second == second->second) {
            throw ValidationError("preference record compares method '" + record.first +
                                  "' with itself");
        }
        const bool decisive =
            record.choice == Preference::First || record.choice == Preference::Second;
        if (!decisive && exclusive_denominator) continue;
        graph.add_judgement(first->second, second->second,
                            record.choice == Preference::First    ? 0
                            : record.choice == Preference::Second ? 1
                                                                  : -1);
    }
    return graph;
}

std::vector<double> rank_centrality(const ComparisonGraph& graph) {
    const std::size_t m = graph.size();

    // Connectivity over undirected compared-pairs edges.
    std::vector<std::size_t> component(m, m);
    std::vector<std::size_t> stack = {0};
    component[0] = 0;
    while (!stack.empty()) {
        const std::size_t at = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < m; ++j) {
            if (graph.totals(at, j) > 0.0 && component[j] == m) {
                component[j] = 0;
                stack.push_back(j);
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (component[i] == m) {
            throw ValidationError("comparison graph is disconnected: method '" +
                                  graph.methods()[i] + "' is not reachable");
        }
    }

    std::size_t max_opponents = 0;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t opponents = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i && graph.totals(i, j) > 0.0) ++opponents;
        }
        max_opponents = std::max(max_opponents, opponents);
    }
    const double d_max = static_cast<double>(max_opponents);

    Matrix transition(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        double away = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i || graph.totals(i, j) == 0.0) continue;
            transition(i, j) = graph.counts(i, j) / graph.totals(i, j) / d_max;
            away += transition(i, j);
        }
        transition(i, i) = 1.0 - away;  // lazy self-transition absorbs the rest
    }

    std::vector<double> scores(m, 1.0 / static_cast<double>(m));
    std::vector<double> next(m);
    constexpr double kTolerance = 1e-10;
    constexpr std::size_t kMaxIterations = 1000000;
    for (std::size_t iteration = 0; iteration < kMaxIterations; ++iteration) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                next[j] += scores[i] * transition(i, j);
            }
        }
        double sum = 0.0;
        for (double v : next) sum += v;
        for (double& v : next) v /= sum;
        double residual = 0.0;
        for (std::size_t i = 0; i < m; ++i) residual += std::abs(next[i] - scores[i]);
        scores.swap(next);
        if (residual < kTolerance) return scores;
    }
    throw NumericalError("rank centrality power iteration did not converge");
}

}  // namespace hlv
