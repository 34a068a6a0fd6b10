#include "hlv/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "hlv/io.hpp"
#include "internal/stats.hpp"

namespace hlv {

namespace {

const double kLog2 = std::log(2.0);

double log2_ratio(double x, double y) { return std::log(x / y) / kLog2; }

void check_pair(const JudgementMatrix& p, const JudgementMatrix& q) {
    if (p.kind() != q.kind()) {
        throw ValidationError("judgement matrices have different task kinds");
    }
    if (p.examples() != q.examples() || p.classes() != q.classes()) {
        throw ValidationError("judgement matrices have different shapes: " +
                              std::to_string(p.examples()) + "x" + std::to_string(p.classes()) +
                              " vs " + std::to_string(q.examples()) + "x" +
                              std::to_string(q.classes()));
    }
}

void require_kind(const JudgementMatrix& p, TaskKind kind, const char* metric) {
    if (p.kind() != kind) {
        throw ValidationError(std::string(metric) + " requires a " +
                              std::string(to_string(kind)) + " judgement matrix");
    }
}

/// Normalized row entropies, base 2 over log2(K).
std::vector<double> row_entropies(const Matrix& values) {
    std::vector<double> etas(values.rows());
    const double norm = std::log2(static_cast<double>(values.cols()));
    for (std::size_t i = 0; i < values.rows(); ++i) {
        double h = 0.0;
        for (double v : values.row(i)) {
            if (v > 0.0) h -= v * std::log2(v);
        }
        etas[i] = h / norm;
    }
    return etas;
}

double binary_entropy_base2(double p) {
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

}  // namespace

double jsd_base2(std::span<const double> a, std::span<const double> b) {
    double kl_a = 0.0;
    double kl_b = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double m = 0.5 * (a[k] + b[k]);
        if (a[k] > 0.0) kl_a += a[k] * log2_ratio(a[k], m);
        if (b[k] > 0.0) kl_b += b[k] * log2_ratio(b[k], m);
    }
    return 0.5 * (kl_a + kl_b);
}

double binary_jsd_base2(double p, double q) {
    const double a[2] = {p, 1.0 - p};
    const double b[2] = {q, 1.0 - q};
    return jsd_base2(a, b);
}

double hard_accuracy(const JudgementMatrix& reference, const JudgementMatrix& predicted) {
    check_pair(reference, predicted);
    require_kind(reference, TaskKind::Multiclass, "hard_accuracy");
    const Matrix ip = harden(reference).values();
    const Matrix iq = harden(predicted).values();
    double correct = 0.0;
    for (std::size_t i = 0; i < ip.rows(); ++i) {
        double overlap = 0.0;
        for (std::size_t k = 0; k < ip.cols(); ++k) overlap += ip(i, k) * iq(i, k);
        correct += overlap;
    }
    return correct / static_cast<double>(ip.rows());
}

double hard_macro_f1(const JudgementMatrix& reference, const JudgementMatrix& predicted) {
    check_pair(reference, predicted);
    const Matrix ip = harden(reference).values();
    const Matrix iq = harden(predicted).values();
    double sum = 0.0;
    for (std::size_t k = 0; k < ip.cols(); ++k) {
        double tp = 0.0;
        double denom = 0.0;
        for (std::size_t i = 0; i < ip.rows(); ++i) {
            tp += ip(i, k) * iq(i, k);
            denom += ip(i, k) + iq(i, k);
        }
        sum += denom == 0.0 ? 1.0 : 2.0 * tp / denom;
    }
    return sum / static_cast<double>(ip.cols());
}

double hard_micro_f1(const JudgementMatrix& reference, const JudgementMatrix& predicted) {
    check_pair(reference, predicted);
    require_kind(reference, TaskKind::Multilabel, "hard_micro_f1");
    const Matrix jp = harden(reference).values();
    const Matrix jq = harden(predicted).values();
    double tp = 0.0;
    double denom = 0.0;
    for (std::size_t i = 0; i < jp.rows(); ++i) {
        for (std::size_t k = 0; k < jp.cols(); ++k) {
            tp += jp(i, k) * jq(i, k);
            denom += jp(i, k) + jq(i, k);
        }
    }
    return denom == 0.0 ? 1.0 : 2.0 * tp / denom;
}

double soft_accuracy(const JudgementMatrix& reference, const JudgementMatrix& predicted) {
    check_pair(reference, predicted);
    require_kind(reference, TaskKind::Multiclass, "soft_accuracy");
    const Matrix& p = reference.values();
    const Matrix& q = predicted.values();
    double overlap = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        double row = 0.0;
        for (std::size_t k = 0; k < p.cols(); ++k) row += std::min(p(i, k), q(i, k));
        overlap += row;
    }
    return overlap / static_cast<double>(p.rows());
}

double soft_micro_f1(const JudgementMatrix& reference, const JudgementMatrix& predicted) {
    check_pair(reference, predicted);
    const Matrix& p = reference.values();
    const Matrix& q = predicted.values();
    double overlap = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        for (std::size_t k = 0; k < p.cols(); ++k) {
            overlap += std::min(p(i, k), q(i, k));
            mass += p(i, k) + q(i, k);
        }
    }
    return mass == 0.0 ? 1.0 : 2.0 * overlap / mass;
}

double soft_macro_f1(const JudgementMatrix& reference, const JudgementMatrix& predicted) {
    check_pair(reference, predicted);
    const Matrix& p = reference.values();
    const Matrix& q = predicted.values();
    double sum = 0.0;
    for (std::size_t k = 0; k < p.cols(); ++k) {
        double overlap = 0.0;
        double mass = 0.0;
        for (std::size_t i = 0; i < p.rows(); ++i) {
            overlap += std::min(p(i, k), q(i, k));
            mass += p(i, k) + q(i, k);
        }
        sum += mass == 0.0 ? 1.0 : 2.0 * overlap / mass;
    }
    return sum / static_cast<double>(p.cols());
}

double po_jsd(const JudgementMatrix& reference, const JudgementMatrix& predicted) {
    check_pair(reference, predicted);
    require_kind(reference, TaskKind::Multiclass, "po_jsd");
    const Matrix& p = reference.values();
    const Matrix& q = predicted.values();
    double total = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i) total += jsd_base2(p.row(i), q.row(i));
    return 1.0 - total / static_cast<double>(p.rows());
}

double multilabel_po_jsd(const JudgementMatrix& reference, const JudgementMatrix& predicted) {
    check_pair(reference, predicted);
    require_kind(reference, TaskKind::Multilabel, "multilabel_po_jsd");
    const Matrix& p = reference.values();
    const Matrix& q = predicted.values();
    double total = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        for (std::size_t k = 0; k < p.cols(); ++k) {
            total += binary_jsd_base2(p(i, k), q(i, k));
        }
    }
    return 1.0 - total / static_cast<double>(p.rows() * p.cols());
}

double entropy_correlation(const JudgementMatrix& reference, const JudgementMatrix& predicted) {
    check_pair(reference, predicted);
    require_kind(reference, TaskKind::Multiclass, "entropy_correlation");
    const std::vector<double> ep = row_entropies(reference.values());
    const std::vector<double> eq = row_entropies(predicted.values());
    const auto r = detail::pearson_or_undefined(ep, eq);
    if (!r) {
        throw UndefinedMetricError(
            "entropy correlation is undefined: row entropies are constant on at least one side");
    }
    return *r;
}

double multilabel_entropy_correlation(const JudgementMatrix& reference,
                                      const JudgementMatrix& predicted) {
    check_pair(reference, predicted);
    require_kind(reference, TaskKind::Multilabel, "multilabel_entropy_correlation");
    const Matrix& p = reference.values();
    const Matrix& q = predicted.values();
    double sum = 0.0;
    std::vector<double> ep(p.rows());
    std::vector<double> eq(p.rows());
    for (std::size_t k = 0; k < p.cols(); ++k) {
        for (std::size_t i = 0; i < p.rows(); ++i) {
            ep[i] = binary_entropy_base2(p(i, k));
            eq[i] = binary_entropy_base2(q(i, k));
        }
        const auto r = detail::pearson_or_undefined(ep, eq);
        if (!r) {
            throw UndefinedMetricError("entropy correlation is undefined: class " +
                                       std::to_string(k) +
                                       " has constant cell entropies on at least one side");
        }
        sum += *r;
    }
    return sum / static_cast<double>(p.cols());
}

ClassPRF soft_class_prf(const JudgementMatrix& reference, const JudgementMatrix& predicted,
                        std::size_t klass) {
    check_pair(reference, predicted);
    if (klass >= reference.classes()) {
        throw ValidationError("class index " + std::to_string(klass) + " out of range");
    }
    const Matrix& p = reference.values();
    const Matrix& q = predicted.values();
    double overlap = 0.0;
    double ref_mass = 0.0;
    double pred_mass = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        overlap += std::min(p(i, klass), q(i, klass));
        ref_mass += p(i, klass);
        pred_mass += q(i, klass);
    }
    ClassPRF out;
    out.precision = pred_mass == 0.0 ? 1.0 : overlap / pred_mass;
    out.recall = ref_mass == 0.0 ? 1.0 : overlap / ref_mass;
    const double mass = ref_mass + pred_mass;
    out.f1 = mass == 0.0 ? 1.0 : 2.0 * overlap / mass;
    return out;
}

bool MetricReport::has(std::string_view name) const {
    return values_.find(std::string(name)) != values_.end();
}

double MetricReport::at(std::string_view name) const {
    auto it = values_.find(std::string(name));
    if (it == values_.end()) {
        throw ValidationError("metric report has no value named '" + std::string(name) + "'");
    }
    return it->second;
}

std::string MetricReport::to_json() const {
    nlohmann::json j;
    j["task"] = std::string(to_string(kind_));
    j["examples"] = examples_;
    j["classes"] = classes_;
    for (const auto& [name, value] : values_) j[name] = round_sig9(value);
    if (entropy_corr_.has_value()) {
        j["entropy_correlation"] = round_sig9(*entropy_corr_);
        j["entropy_correlation_defined"] = true;
    } else {
        j["entropy_correlation"] = nullptr;
        j["entropy_correlation_defined"] = false;
    }
    return j.dump(2);
}

MetricReport MetricReport::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed metric report: ") + e.what());
    }
    MetricReport report(task_kind_from_string(j.at("task").get<std::string>()),
                        j.at("examples").get<std::size_t>(),
                        j.at("classes").get<std::size_t>());
    for (const auto& [key, value] : j.items()) {
        if (key == "task" || key == "examples" || key == "classes" ||
            key == "entropy_correlation" || key == "entropy_correlation_defined") {
            continue;
        }
        report.set(key, value.get<double>());
    }
    if (j.at("entropy_correlation_defined").get<bool>()) {
        report.set_entropy_correlation(j.at("entropy_correlation").get<double>());
    }
    return report;
}

MetricReport compute_report(const JudgementMatrix& reference, const JudgementMatrix& predicted) {
    check_pair(reference, predicted);
    MetricReport report(reference.kind(), reference.examples(), reference.classes());
    if (reference.kind() == TaskKind::Multiclass) {
        report.set("accuracy", hard_accuracy(reference, predicted));
        report.set("macro_f1", hard_macro_f1(reference, predicted));
        report.set("soft_accuracy", soft_accuracy(reference, predicted));
        report.set("soft_macro_f1", soft_macro_f1(reference, predicted));
        report.set("po_jsd", po_jsd(reference, predicted));
        try {
            report.set_entropy_correlation(entropy_correlation(reference, predicted));
        } catch (const UndefinedMetricError&) {
            report.set_entropy_correlation(std::nullopt);
        }
    } else {
        report.set("micro_f1", hard_micro_f1(reference, predicted));
        report.set("macro_f1", hard_macro_f1(reference, predicted));
        report.set("soft_micro_f1", soft_micro_f1(reference, predicted));
        report.set("soft_macro_f1", soft_macro_f1(reference, predicted));
        report.set("po_jsd", multilabel_po_jsd(reference, predicted));
        try {
            report.set_entropy_correlation(
                multilabel_entropy_correlation(reference, predicted));
        } catch (const UndefinedMetricError&) {
            report.set_entropy_correlation(std::nullopt);
        }
    }
    report.set("selection_score", selection_score(report));
    return report;
}

double selection_score(const MetricReport& report) {
    const bool multiclass = report.kind() == TaskKind::Multiclass;
    std::vector<double> included = {
        report.at(multiclass ? "accuracy" : "micro_f1"),
        report.at("po_jsd"),
        report.at(multiclass ? "soft_accuracy" : "soft_micro_f1"),
    };
    if (report.entropy_correlation_defined()) {
        included.push_back((*report.entropy_correlation() + 1.0) / 2.0);
    }
    double log_sum = 0.0;
    for (double v : included) {
        if (v <= 0.0) return 0.0;
        log_sum += std::log(v);
    }
    return std::exp(log_sum / static_cast<double>(included.size()));
}

}  // namespace hlv
