#include "laddr/index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "laddr/errors.hpp"

namespace laddr {

namespace {
constexpr uint32_t kLeafSize = 16;
}

NeighborIndex::NeighborIndex(const std::vector<FeatureVector>& points,
                             CovarianceStructure cov)
    : cov_(std::move(cov)) {
    if (points.empty()) throw ValidationError("index build: no points");
    cov_.validate();
    dim_ = cov_.size();
    count_ = points.size();

    multipliers_ = ScaledSpaceTransform::from(cov_).multipliers;
    scaled_.resize(count_ * dim_);
    original_.resize(count_ * dim_);
    for (size_t p = 0; p < count_; ++p) {
        require_dimension(points[p], dim_, "index build point");
        require_finite(points[p], "index build point");
        for (size_t c = 0; c < dim_; ++c) {
            original_[p * dim_ + c] = points[p][c];
            scaled_[p * dim_ + c] = points[p][c] * multipliers_[c];
        }
    }

    order_.resize(count_);
    for (uint32_t i = 0; i < count_; ++i) order_[i] = i;
    nodes_.reserve(2 * count_ / kLeafSize + 2);
    root_ = build(0, static_cast<uint32_t>(count_));
}

int32_t NeighborIndex::build(uint32_t begin, uint32_t end) {
    Node node;
    node.begin = begin;
    node.end = end;
    if (end - begin <= kLeafSize) {
        node.leaf = true;
        nodes_.push_back(node);
        return static_cast<int32_t>(nodes_.size() - 1);
    }

    // split on the axis with the widest spread in this subset
    uint32_t axis = 0;
    double best_spread = -1.0;
    for (uint32_t c = 0; c < dim_; ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (uint32_t i = begin; i < end; ++i) {
            const double v = scaled_[order_[i] * dim_ + c];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > best_spread) {
            best_spread = hi - lo;
            axis = c;
        }
    }

    const uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](uint32_t a, uint32_t b) {
                         const double va = scaled_[a * dim_ + axis];
                         const double vb = scaled_[b * dim_ + axis];
                         return va < vb || (va == vb && a < b);
                     });
    node.axis = axis;
    node.split = scaled_[order_[mid] * dim_ + axis];

    nodes_.push_back(node);
    const auto self = static_cast<int32_t>(nodes_.size() - 1);
    const int32_t left = build(begin, mid);
    const int32_t right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

void NeighborIndex::search(int32_t node_id, const double* query, double& best_sq,
                           uint32_t& best_id) const {
    const Node& node = nodes_[node_id];
    if (node.leaf) {
        for (uint32_t i = node.begin; i < node.end; ++i) {
            const uint32_t p = order_[i];
            const double* coords = &scaled_[p * dim_];
            double sum = 0.0;
            for (size_t c = 0; c < dim_; ++c) {
                const double d = query[c] - coords[c];
                sum += d * d;
                if (sum >= best_sq) break;
            }
            if (sum < best_sq) {
                best_sq = sum;
                best_id = p;
            }
        }
        return;
    }
    const double delta = query[node.axis] - node.split;
    const int32_t near = delta < 0.0 ? node.left : node.right;
    const int32_t far = delta < 0.0 ? node.right : node.left;
    search(near, query, best_sq, best_id);
    if (delta * delta < best_sq) search(far, query, best_sq, best_id);
}

NearestResult NeighborIndex::nearest(std::span<const double> query) const {
    if (query.size() != dim_) throw ValidationError("index query: dimension mismatch");
    for (double v : query)
        if (!std::isfinite(v)) throw ValidationError("index query: non-finite value");

    std::vector<double> scaled_query(dim_);
    for (size_t c = 0; c < dim_; ++c) scaled_query[c] = query[c] * multipliers_[c];

    double best_sq = std::numeric_limits<double>::infinity();
    uint32_t best_id = 0;
    search(root_, scaled_query.data(), best_sq, best_id);

    // report the distance through the same formula the oracle uses
    std::span<const double> point(&original_[best_id * dim_], dim_);
    return NearestResult{mahalanobis_distance(query, point, cov_), best_id};
}

NearestResult NeighborIndex::nearest(std::span<const double> query,
                                     const CovarianceStructure& expected) const {
    if (!(expected == cov_))
        throw ValidationError(
            "index query: decay structure differs from the one the index was built with; "
            "rebuild the index");
    return nearest(query);
}

NeighborIndex build_index(const KnowledgeBase& kb, const CovarianceStructure& cov) {
    if (cov.size() != kb.dimension())
        throw ValidationError("index build: decay structure/knowledge-base dimension mismatch");
    return NeighborIndex(kb.points(), cov);
}

NearestResult brute_force_nearest(const std::vector<FeatureVector>& points,
                                  const CovarianceStructure& cov,
                                  std::span<const double> query) {
    if (points.empty()) throw ValidationError("brute-force nearest: no points");
    double best = std::numeric_limits<double>::infinity();
    size_t best_id = 0;
    for (size_t p = 0; p < points.size(); ++p) {
        const double d = mahalanobis_distance(query, points[p], cov);
        if (d < best) {
            best = d;
            best_id = p;
        }
    }
    return NearestResult{best, best_id};
}

NearestResult brute_force_nearest(const KnowledgeBase& kb, const CovarianceStructure& cov,
                                  std::span<const double> query) {
    return brute_force_nearest(kb.points(), cov, query);
}

} // namespace laddr
