#pragma once

#include <span>
#include <vector>

#include "laddr/types.hpp"

namespace laddr {

// Axis-weighted Euclidean distance with a diagonal weight structure:
// sqrt(sum_n (a_n - b_n)^2 / rate_n). A metric for positive rates.
double mahalanobis_distance(std::span<const double> a, std::span<const double> b,
                            const CovarianceStructure& cov);

// Per-axis multipliers 1/sqrt(rate_n): after applying them, plain Euclidean
// distance equals the weighted distance above, which is what lets an exact
// spatial index answer nearest-neighbor queries in the weighted metric.
struct ScaledSpaceTransform {
    std::vector<double> multipliers;

    static ScaledSpaceTransform from(const CovarianceStructure& cov);

    size_t dimension() const { return multipliers.size(); }
    FeatureVector apply(std::span<const double> point) const;
};

std::vector<FeatureVector> to_scaled_space(const std::vector<FeatureVector>& points,
                                           const CovarianceStructure& cov);

} // namespace laddr
