#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hlv/types.hpp"

namespace hlv {

inline constexpr std::size_t kDefaultHashDims = std::size_t{1} << 18;

struct FeatureEntry {
    std::uint32_t index = 0;
    double value = 0.0;

    friend bool operator==(const FeatureEntry&, const FeatureEntry&) = default;
};

/// N×D feature rows stored sparsely (entries sorted by column index).
/// Hashed bag-of-token rows are naturally sparse; dense feature files
/// convert via from_dense.
class FeatureSet {
public:
    FeatureSet(std::size_t dims, std::vector<std::vector<FeatureEntry>> rows);

    static FeatureSet from_dense(const Matrix& rows);

    std::size_t size() const noexcept { return rows_.size(); }
    std::size_t dims() const noexcept { return dims_; }
    std::span<const FeatureEntry> row(std::size_t i) const { return rows_[i]; }

    friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

private:
    std::size_t dims_;
    std::vector<std::vector<FeatureEntry>> rows_;
};

/// Signed feature hashing over lowercased alphanumeric tokens, one row per
/// text, L2-normalized. `dims` must be a power of two. Empty texts map to
/// zero rows.
FeatureSet featurize_text(std::span<const std::string> texts,
                          std::size_t dims = kDefaultHashDims);

}  // namespace hlv
