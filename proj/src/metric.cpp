#include "laddr/metric.hpp"

#include <cmath>

#include "laddr/errors.hpp"

namespace laddr {

double mahalanobis_distance(std::span<const double> a, std::span<const double> b,
                            const CovarianceStructure& cov) {
    if (a.size() != b.size() || a.size() != cov.size())
        throw ValidationError("mahalanobis: dimension mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
            throw ValidationError("mahalanobis: non-finite input");
        const double d = a[i] - b[i];
        sum += d * d / cov.decay_rates[i];
    }
    return std::sqrt(sum);
}

ScaledSpaceTransform ScaledSpaceTransform::from(const CovarianceStructure& cov) {
    cov.validate();
    ScaledSpaceTransform t;
    t.multipliers.reserve(cov.size());
    for (double rate : cov.decay_rates)
        t.multipliers.push_back(1.0 / std::sqrt(rate));
    return t;
}

FeatureVector ScaledSpaceTransform::apply(std::span<const double> point) const {
    if (point.size() != multipliers.size())
        throw ValidationError("scaled-space transform: dimension mismatch");
    FeatureVector out(point.size());
    for (size_t i = 0; i < point.size(); ++i) out[i] = point[i] * multipliers[i];
    return out;
}

std::vector<FeatureVector> to_scaled_space(const std::vector<FeatureVector>& points,
                                           const CovarianceStructure& cov) {
    auto t = ScaledSpaceTransform::from(cov);
    std::vector<FeatureVector> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(t.apply(p));
    return out;
}

} // namespace laddr
