#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hlv/types.hpp"

namespace hlv {

/// Monte-Carlo study configuration: B pairs of N×K judgement matrices with
/// rows drawn from symmetric Dirichlet(alpha) and Dirichlet(beta).
struct StudyConfig {
    std::size_t classes = 10;
    std::size_t examples = 1000;
    std::size_t samples = 500;
    double alpha = 1.0;
    double beta = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct MetricPairCorrelation {
    std::string first;
    std::string second;
    double r = 0.0;
};

struct StudyResult {
    StudyConfig config;
    /// Pairwise Pearson correlations in fixed order:
    /// A-J, A-E, A-S, J-E, J-S, E-S (accuracy, PO-JSD, entropy correlation,
    /// soft accuracy).
    std::vector<MetricPairCorrelation> correlations;
    /// Samples whose entropy correlation was undefined; excluded from the
    /// E-involving pairs only.
    std::size_t dropped_entropy_samples = 0;

    double at(std::string_view pair) const;  // e.g. "J-S"
};

/// Sample B (P, Q) pairs and correlate the four multiclass metrics over
/// them. Deterministic per seed; per-sample RNG substreams derive from
/// (seed, sample index).
StudyResult dirichlet_metric_correlations(const StudyConfig& config);

/// Max over trials of soft_accuracy - po_jsd on random multiclass pairs
/// (concentrations varied per trial). Nonpositive up to rounding.
double max_bound_violation(std::size_t trials, std::size_t examples, std::size_t classes,
                           std::uint64_t seed);

struct CurvePoint {
    double q = 0.0;
    double soft_accuracy = 0.0;
    double po_jsd = 0.0;
};

/// Single binary example with reference (0.5, 0.5) and prediction (q, 1-q)
/// for q on a uniform grid over [0,1] with `steps` points (steps >= 2).
std::vector<CurvePoint> sa_pojsd_curve(std::size_t steps);

/// Pearson correlation coefficient; throws NumericalError on zero variance
/// or fewer than 3 points.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Two-sided permutation test for Pearson r with add-one smoothing:
/// p = (1 + #{|r_perm| >= |r_obs|}) / (permutations + 1).
double permutation_pvalue(std::span<const double> xs, std::span<const double> ys,
                          std::size_t permutations = 10000, std::uint64_t seed = 0);

/// Pairwise win statistics among methods. counts(i, j) is the number of
/// judgements where j beat i; totals(i, j) counts all judgements of the
/// pair.
class ComparisonGraph {
public:
    explicit ComparisonGraph(std::vector<std::string> methods);

    std::size_t size() const noexcept { return methods_.size(); }
    const std::vector<std::string>& methods() const noexcept { return methods_; }

    double counts(std::size_t i, std::size_t j) const { return counts_(i, j); }
    double totals(std::size_t i, std::size_t j) const { return totals_(i, j); }

    /// Record one judgement of the pair (i, j); winner < 0 means no decisive
    /// winner ("both"/"neither").
    void add_judgement(std::size_t i, std::size_t j, int winner);

    /// Bulk constructor used by tests: explicit count/total matrices.
    static ComparisonGraph from_matrices(std::vector<std::string> methods, Matrix counts,
                                         Matrix totals);

private:
    std::vector<std::string> methods_;
    Matrix counts_;
    Matrix totals_;
};

enum class Preference { First, Second, Both, Neither };

struct PreferenceRecord {
    std::string first;
    std::string second;
    Preference choice = Preference::Neither;
};

/// Line-delimited {"first": name, "second": name, "choice": ...} records.
std::vector<PreferenceRecord> read_preferences(const std::filesystem::path& path);

/// Accumulate records into a comparison graph over `methods`. "both" and
/// "neither" count as pair exposures without a win; with
/// `exclusive_denominator` they are dropped from the totals as well.
/// Unknown method names are an error.
ComparisonGraph wins_from_preferences(std::vector<std::string> methods,
                                      std::span<const PreferenceRecord> records,
                                      bool exclusive_denominator = false);

/// Stationary distribution of the pairwise-win random walk: the transition
/// from i to j is p_ij / d_max with p_ij = counts(i,j)/totals(i,j) and d_max
/// the maximum number of compared opponents; leftover mass stays on i.
/// Power iteration to L1 residual < 1e-10. Scores are nonnegative, sum to 1,
/// and align with the graph's method order. Throws on a disconnected graph.
std::vector<double> rank_centrality(const ComparisonGraph& graph);

}  // namespace hlv
