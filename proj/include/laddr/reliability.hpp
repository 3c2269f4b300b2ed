#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "laddr/index.hpp"
#include "laddr/knowledge_base.hpp"
#include "laddr/types.hpp"

namespace laddr {

// Scale factor of the decay kernel, fixed so a query that coincides with a
// training point scores exactly 1. Not user-configurable.
inline constexpr double kLaplaceScale = 0.5;

// Relative reliability of one query against the knowledge base:
// exp(-2 * d) with d the exact nearest-neighbor weighted distance. Because
// exp(-2*.) is strictly decreasing, this equals the pointwise maximum of the
// per-training-point decay kernels, so the value lies in (0, 1] and is 1
// exactly when the query coincides with a stored point.
struct ReliabilityScore {
    double value = 0.0;
    size_t nearest_point_id = 0;
    double nearest_distance = 0.0;
};

ReliabilityScore score_from_nearest(const NearestResult& nearest);
ReliabilityScore reliability(const NeighborIndex& index, std::span<const double> query);

// Builds the query vector for the configured evidence mode, in normalized
// units. InputsOnly passes the inputs through (for use against an
// input-projected knowledge base); InputsPlusTarget additionally places the
// normalized prediction at the schema's target position.
FeatureVector select_query_vector(const Schema& schema, EvidenceMode mode,
                                  std::span<const double> normalized_inputs,
                                  std::optional<double> normalized_prediction);

// Knowledge base + config wired for scoring: projects the evidence view for
// the mode, solves the decay structure for the matching axes, and holds the
// exact index. Immutable after construction; concurrent scoring is safe.
class ReliabilityEngine {
public:
    ReliabilityEngine(const KnowledgeBase& kb, const ReliabilityConfig& config);

    // query already in the engine's normalized evidence space
    ReliabilityScore score_normalized(std::span<const double> query) const;

    // raw engineering units; inputs in schema input order. The prediction is
    // required (and normalized through the target scaler) in
    // InputsPlusTarget mode and ignored otherwise.
    ReliabilityScore score_raw(std::span<const double> raw_inputs,
                               std::optional<double> raw_prediction) const;

    double normalize_prediction(double raw_prediction) const;
    double denormalize_prediction(double normalized) const;

    const KnowledgeBase& evidence() const { return kb_; }
    const ReliabilityConfig& config() const { return config_; }
    const CovarianceStructure& covariance() const { return cov_; }
    const NeighborIndex& index() const { return index_; }
    size_t dimension() const { return kb_.dimension(); }
    EvidenceMode mode() const { return config_.mode; }

private:
    KnowledgeBase kb_; // evidence view (projected for InputsOnly)
    ReliabilityConfig config_;
    CovarianceStructure cov_;
    NeighborIndex index_;
    std::optional<size_t> target_scaler_index_; // into the FULL schema's scaler
    MinMaxScaler full_scaler_;
};

struct MapAxis {
    size_t feature = 0;  // index into the engine's evidence space
    double lo = -0.1;    // normalized grid range; the default extends past the
    double hi = 1.1;     // data so the decay beyond it is visible
    size_t resolution = 201;
};

struct ReliabilityMap {
    MapAxis axis1;
    MapAxis axis2;
    FeatureVector fixed;        // engine-dim vector; axis positions ignored
    std::vector<double> values; // row-major: [i1 * axis2.resolution + i2]

    double at(size_t i1, size_t i2) const { return values[i1 * axis2.resolution + i2]; }
    double coord1(size_t i1) const;
    double coord2(size_t i2) const;
};

ReliabilityMap generate_map(const ReliabilityEngine& engine, MapAxis axis1, MapAxis axis2,
                            const FeatureVector& fixed_values);
ReliabilityMap generate_map(const KnowledgeBase& kb, const ReliabilityConfig& config,
                            size_t axis1, size_t axis2, const FeatureVector& fixed_values,
                            size_t resolution);

// One row per grid cell: axis1, axis2, reliability.
std::string map_to_csv(const ReliabilityMap& map, const Schema& evidence_schema,
                       const std::vector<std::string>& comment_lines = {});

// Binary portable pixel map (P6) heatmap, axis1 horizontal, axis2 vertical
// (origin bottom-left).
std::string map_to_ppm(const ReliabilityMap& map);

} // namespace laddr
