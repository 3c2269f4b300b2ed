#pragma once

#include "laddr/types.hpp"

namespace laddr {

// Solves the per-axis decay rates from extrapolation diameters so that a
// query offset by exactly half a diameter along one axis from a lone
// training point scores `decay_threshold`:
//
//   rate_n = (diameter_n / ln(1/decay_threshold))^2
//
// since exp(-2 * (d/2) / sqrt(rate)) == t  <=>  sqrt(rate) == d / ln(1/t).
CovarianceStructure solve_covariance(const DiameterVector& diameters,
                                     double decay_threshold);

} // namespace laddr
