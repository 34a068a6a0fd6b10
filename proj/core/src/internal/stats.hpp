#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>

namespace hlv::detail {

// Variance below this is treated as zero when deciding whether a Pearson
// correlation is defined (catches constant sequences up to rounding).
inline constexpr double kVarianceFloor = 1e-24;

struct PearsonParts {
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    std::size_t n = 0;
};

inline PearsonParts pearson_parts(std::span<const double> xs, std::span<const double> ys) {
    PearsonParts parts;
    parts.n = xs.size();
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= static_cast<double>(xs.size());
    mean_y /= static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        parts.sxx += dx * dx;
        parts.syy += dy * dy;
        parts.sxy += dx * dy;
    }
    return parts;
}

/// Pearson r, or nullopt when either side's variance is (numerically) zero.
inline std::optional<double> pearson_or_undefined(std::span<const double> xs,
                                                  std::span<const double> ys) {
    const PearsonParts p = pearson_parts(xs, ys);
    const double n = static_cast<double>(p.n);
    if (p.sxx <= kVarianceFloor * n || p.syy <= kVarianceFloor * n) return std::nullopt;
    return p.sxy / (std::sqrt(p.sxx) * std::sqrt(p.syy));
}

}  // namespace hlv::detail
