#include "hlv/judgement.hpp"

#include <cmath>

namespace hlv {

JudgementMatrix::JudgementMatrix(Matrix values, TaskKind kind)
    : values_(std::move(values)), kind_(kind) {
    for (std::size_t i = 0; i < values_.rows(); ++i) {
        double sum = 0.0;
        for (double v : values_.row(i)) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ValidationError("judgement value " + std::to_string(v) + " in row " +
                                      std::to_string(i) + " is outside [0,1]");
            }
            sum += v;
        }
        if (kind_ == TaskKind::Multiclass && std::abs(sum - 1.0) > kRowSumTolerance) {
            throw ValidationError("multiclass judgement row " + std::to_string(i) +
                                  " sums to " + std::to_string(sum) + ", expected 1");
        }
    }
}

HardAssignment::HardAssignment(Matrix values, TaskKind kind)
    : values_(std::move(values)), kind_(kind) {
    for (std::size_t i = 0; i < values_.rows(); ++i) {
        std::size_t ones = 0;
        for (double v : values_.row(i)) {
            if (v != 0.0 && v != 1.0) {
                throw ValidationError("hard assignment row " + std::to_string(i) +
                                      " has non-binary value " + std::to_string(v));
            }
            if (v == 1.0) ++ones;
        }
        if (kind_ == TaskKind::Multiclass && ones != 1) {
            throw ValidationError("multiclass hard assignment row " + std::to_string(i) +
                                  " has " + std::to_string(ones) + " ones, expected 1");
        }
    }
}

JudgementMatrix build_judgements(const AnnotationSet& annotations, const LabelSpace& space) {
    if (annotations.size() == 0) {
        throw ValidationError("cannot build judgements from an empty annotation set");
    }
    Matrix values(annotations.size(), space.size());
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        const auto& records = annotations[i].records;
        for (const auto& record : records) {
            for (std::size_t label : record.labels) values(i, label) += 1.0;
        }
        const double total = static_cast<double>(records.size());
        for (double& v : values.row(i)) v /= total;
    }
    return {std::move(values), space.kind()};
}

HardAssignment harden(const JudgementMatrix& judgements) {
    const Matrix& in = judgements.values();
    Matrix out(in.rows(), in.cols());
    for (std::size_t i = 0; i < in.rows(); ++i) {
        if (judgements.kind() == TaskKind::Multiclass) {
            std::size_t best = 0;
            for (std::size_t k = 1; k < in.cols(); ++k) {
                if (in(i, k) > in(i, best)) best = k;  // ties keep the lowest index
            }
            out(i, best) = 1.0;
        } else {
            for (std::size_t k = 0; k < in.cols(); ++k) {
                if (in(i, k) > 0.5) out(i, k) = 1.0;
            }
        }
    }
    return {std::move(out), judgements.kind()};
}

}  // namespace hlv
