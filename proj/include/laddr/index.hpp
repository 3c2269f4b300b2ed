#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "laddr/knowledge_base.hpp"
#include "laddr/metric.hpp"
#include "laddr/types.hpp"

namespace laddr {

struct NearestResult {
    double distance = 0.0; // weighted distance to the nearest stored point
    size_t point_id = 0;   // index of one argmin in the build point order
};

// Exact nearest-neighbor index: a kd-tree over the points mapped into scaled
// space, where the weighted metric is plain Euclidean. Queries return the
// true minimum (no approximation). Immutable after build; concurrent reads
// are safe. The decay structure is fixed at build time and queries carrying
// a different one are rejected rather than silently answered.
class NeighborIndex {
public:
    NeighborIndex(const std::vector<FeatureVector>& points, CovarianceStructure cov);

    NearestResult nearest(std::span<const double> query) const;

    // Stale-structure guard for callers that re-derive decay rates: the
    // expected structure must equal the build-time one exactly.
    NearestResult nearest(std::span<const double> query,
                          const CovarianceStructure& expected) const;

    const CovarianceStructure& covariance() const { return cov_; }
    size_t size() const { return count_; }
    size_t dimension() const { return dim_; }

private:
    struct Node {
        double split = 0.0;
        int32_t left = -1;
        int32_t right = -1;
        uint32_t begin = 0; // leaf: range into order_
        uint32_t end = 0;
        uint32_t axis = 0;
        bool leaf = false;
    };

    int32_t build(uint32_t begin, uint32_t end);
    void search(int32_t node, const double* query, double& best_sq, uint32_t& best_id) const;

    size_t dim_ = 0;
    size_t count_ = 0;
    CovarianceStructure cov_;
    std::vector<double> multipliers_; // 1/sqrt(rate) per axis
    std::vector<double> scaled_;      // count x dim, scaled coords, build order
    std::vector<double> original_;    // count x dim, unscaled coords, build order
    std::vector<uint32_t> order_;
    std::vector<Node> nodes_;
    int32_t root_ = -1;
};

NeighborIndex build_index(const KnowledgeBase& kb, const CovarianceStructure& cov);

// Reference semantics for `nearest`: a linear scan over all points with the
// weighted distance evaluated directly. Kept independent of the kd-tree so
// it can act as a verification oracle.
NearestResult brute_force_nearest(const std::vector<FeatureVector>& points,
                                  const CovarianceStructure& cov,
                                  std::span<const double> query);
NearestResult brute_force_nearest(const KnowledgeBase& kb, const CovarianceStructure& cov,
                                  std::span<const double> query);

} // namespace laddr
