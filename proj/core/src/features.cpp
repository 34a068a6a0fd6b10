#include "hlv/features.hpp"

#include <cctype>
#include <cmath>
#include <map>

#include "internal/fnv.hpp"

namespace hlv {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

FeatureSet::FeatureSet(std::size_t dims, std::vector<std::vector<FeatureEntry>> rows)
    : dims_(dims), rows_(std::move(rows)) {
    if (dims_ == 0) throw ValidationError("feature dimension must be positive");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        std::uint32_t previous = 0;
        bool first = true;
        for (const auto& entry : rows_[i]) {
            if (entry.index >= dims_) {
                throw ValidationError("feature index " + std::to_string(entry.index) +
                                      " out of range in row " + std::to_string(i));
            }
            if (!first && entry.index <= previous) {
                throw ValidationError("feature row " + std::to_string(i) +
                                      " is not sorted by column");
            }
            if (!std::isfinite(entry.value)) {
                throw ValidationError("non-finite feature value in row " + std::to_string(i));
            }
            previous = entry.index;
            first = false;
        }
    }
}

FeatureSet FeatureSet::from_dense(const Matrix& rows) {
    std::vector<std::vector<FeatureEntry>> sparse(rows.rows());
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        for (std::size_t j = 0; j < rows.cols(); ++j) {
            if (rows(i, j) != 0.0) {
                sparse[i].push_back({static_cast<std::uint32_t>(j), rows(i, j)});
            }
        }
    }
    return {rows.cols(), std::move(sparse)};
}

FeatureSet featurize_text(std::span<const std::string> texts, std::size_t dims) {
    if (texts.empty()) throw ValidationError("cannot featurize an empty corpus");
    if (!is_power_of_two(dims)) {
        throw ValidationError("hash dimension must be a power of two, got " +
                              std::to_string(dims));
    }
    const std::uint64_t mask = dims - 1;
    std::vector<std::vector<FeatureEntry>> rows(texts.size());
    std::string token;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        std::map<std::uint32_t, double> cells;
        token.clear();
        auto flush = [&] {
            if (token.empty()) return;
            const std::uint64_t hash = detail::fnv1a64(token);
            const auto column = static_cast<std::uint32_t>(hash & mask);
            const double sign = (hash >> 63) != 0 ? -1.0 : 1.0;
            cells[column] += sign;
            token.clear();
        };
        for (unsigned char c : texts[i]) {
            if (std::isalnum(c)) {
                token.push_back(static_cast<char>(std::tolower(c)));
            } else {
                flush();
            }
        }
        flush();
        double norm = 0.0;
        for (const auto& [column, value] : cells) norm += value * value;
        norm = std::sqrt(norm);
        rows[i].reserve(cells.size());
        for (const auto& [column, value] : cells) {
            if (value != 0.0) rows[i].push_back({column, norm > 0.0 ? value / norm : value});
        }
    }
    return {dims, std::move(rows)};
}

}  // namespace hlv
