#include "laddr/covariance.hpp"

#include <cmath>

#include "laddr/errors.hpp"

namespace laddr {

CovarianceStructure solve_covariance(const DiameterVector& diameters,
                                     double decay_threshold) {
    diameters.validate();
    if (!(decay_threshold > 0.0 && decay_threshold < 1.0))
        throw ValidationError("solve_covariance: decay threshold must lie in (0,1)");
    const double scale = std::log(1.0 / decay_threshold);
    CovarianceStructure cov;
    cov.decay_rates.reserve(diameters.size());
    for (double d : diameters.values) {
        const double root = d / scale;
        cov.decay_rates.push_back(root * root);
    }
    return cov;
}

} // namespace laddr
