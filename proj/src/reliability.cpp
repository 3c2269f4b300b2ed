#include "laddr/reliability.hpp"

#include <cmath>
#include <sstream>

#include "laddr/covariance.hpp"
#include "laddr/csv.hpp"
#include "laddr/errors.hpp"
#include "laddr/io_util.hpp"

namespace laddr {

namespace {

// diameters restricted to the evidence view's axes
DiameterVector project_diameters(const DiameterVector& diameters, const Schema& full,
                                 EvidenceMode mode) {
    if (mode == EvidenceMode::InputsPlusTarget) return diameters;
    DiameterVector out;
    out.values.reserve(full.input_indices().size());
    for (size_t i : full.input_indices()) out.values.push_back(diameters.values[i]);
    return out;
}

const ReliabilityConfig& checked_config(const KnowledgeBase& kb,
                                        const ReliabilityConfig& config) {
    config.validate(kb.schema().size());
    if (config.mode == EvidenceMode::InputsPlusTarget && !kb.schema().target_index())
        throw ValidationError("engine: inputs+target mode needs a target feature in the schema");
    return config;
}

} // namespace

ReliabilityScore score_from_nearest(const NearestResult& nearest) {
    ReliabilityScore s;
    s.nearest_point_id = nearest.point_id;
    s.nearest_distance = nearest.distance;
    s.value = std::exp(-2.0 * nearest.distance);
    return s;
}

ReliabilityScore reliability(const NeighborIndex& index, std::span<const double> query) {
    return score_from_nearest(index.nearest(query));
}

FeatureVector select_query_vector(const Schema& schema, EvidenceMode mode,
                                  std::span<const double> normalized_inputs,
                                  std::optional<double> normalized_prediction) {
    const auto& input_idx = schema.input_indices();
    if (normalized_inputs.size() != input_idx.size()) {
        std::ostringstream msg;
        msg << "query: got " << normalized_inputs.size() << " inputs, schema has "
            << input_idx.size();
        throw ValidationError(msg.str());
    }
    if (mode == EvidenceMode::InputsOnly)
        return FeatureVector(normalized_inputs.begin(), normalized_inputs.end());

    if (!schema.target_index())
        throw ValidationError("query: inputs+target mode needs a target feature in the schema");
    if (!normalized_prediction)
        throw ValidationError("query: inputs+target mode needs a prediction value");

    FeatureVector out(schema.size());
    for (size_t k = 0; k < input_idx.size(); ++k) out[input_idx[k]] = normalized_inputs[k];
    out[*schema.target_index()] = *normalized_prediction;
    return out;
}

ReliabilityEngine::ReliabilityEngine(const KnowledgeBase& kb, const ReliabilityConfig& config)
    : kb_(checked_config(kb, config).mode == EvidenceMode::InputsOnly ? kb.project_inputs()
                                                                      : kb),
      config_(config),
      cov_(solve_covariance(project_diameters(config.diameters, kb.schema(), config.mode),
                            config.decay_threshold)),
      index_(kb_.points(), cov_),
      target_scaler_index_(kb.schema().target_index()),
      full_scaler_(kb.scaler()) {}

ReliabilityScore ReliabilityEngine::score_normalized(std::span<const double> query) const {
    return reliability(index_, query);
}

ReliabilityScore ReliabilityEngine::score_raw(std::span<const double> raw_inputs,
                                              std::optional<double> raw_prediction) const {
    const auto& schema = kb_.schema();
    const auto& inputs = schema.input_indices();
    if (raw_inputs.size() != inputs.size()) {
        std::ostringstream msg;
        msg << "score: got " << raw_inputs.size() << " inputs, schema has " << inputs.size();
        throw ValidationError(msg.str());
    }
    FeatureVector normalized_inputs(inputs.size());
    for (size_t k = 0; k < inputs.size(); ++k) {
        if (!std::isfinite(raw_inputs[k])) throw ValidationError("score: non-finite input");
        normalized_inputs[k] = kb_.scaler().normalize(inputs[k], raw_inputs[k]);
    }
    std::optional<double> normalized_prediction;
    if (config_.mode == EvidenceMode::InputsPlusTarget) {
        if (!raw_prediction)
            throw ValidationError("score: inputs+target mode needs a prediction value");
        if (!std::isfinite(*raw_prediction))
            throw ValidationError("score: non-finite prediction");
        normalized_prediction = normalize_prediction(*raw_prediction);
    }
    const FeatureVector query =
        select_query_vector(schema, config_.mode, normalized_inputs, normalized_prediction);
    return score_normalized(query);
}

double ReliabilityEngine::normalize_prediction(double raw_prediction) const {
    if (!target_scaler_index_)
        throw ValidationError("engine: schema has no target feature");
    return full_scaler_.normalize(*target_scaler_index_, raw_prediction);
}

double ReliabilityEngine::denormalize_prediction(double normalized) const {
    if (!target_scaler_index_)
        throw ValidationError("engine: schema has no target feature");
    return full_scaler_.denormalize(*target_scaler_index_, normalized);
}

double ReliabilityMap::coord1(size_t i1) const {
    return axis1.lo + (axis1.hi - axis1.lo) * static_cast<double>(i1) /
                          static_cast<double>(axis1.resolution - 1);
}

double ReliabilityMap::coord2(size_t i2) const {
    return axis2.lo + (axis2.hi - axis2.lo) * static_cast<double>(i2) /
                          static_cast<double>(axis2.resolution - 1);
}

ReliabilityMap generate_map(const ReliabilityEngine& engine, MapAxis axis1, MapAxis axis2,
                            const FeatureVector& fixed_values) {
    const size_t dim = engine.dimension();
    if (axis1.feature >= dim || axis2.feature >= dim)
        throw ValidationError("map: axis out of range");
    if (axis1.feature == axis2.feature)
        throw ValidationError("map: the two axes must be distinct");
    if (axis1.resolution < 2 || axis2.resolution < 2)
        throw ValidationError("map: resolution must be at least 2 per axis");
    require_dimension(fixed_values, dim, "map fixed values");
    require_finite(fixed_values, "map fixed values");

    ReliabilityMap map;
    map.axis1 = axis1;
    map.axis2 = axis2;
    map.fixed = fixed_values;
    map.values.resize(axis1.resolution * axis2.resolution);

    FeatureVector query = fixed_values;
    for (size_t i1 = 0; i1 < axis1.resolution; ++i1) {
        query[axis1.feature] = map.coord1(i1);
        for (size_t i2 = 0; i2 < axis2.resolution; ++i2) {
            query[axis2.feature] = map.coord2(i2);
            map.values[i1 * axis2.resolution + i2] = engine.score_normalized(query).value;
        }
    }
    return map;
}

ReliabilityMap generate_map(const KnowledgeBase& kb, const ReliabilityConfig& config,
                            size_t axis1, size_t axis2, const FeatureVector& fixed_values,
                            size_t resolution) {
    ReliabilityEngine engine(kb, config);
    MapAxis a1, a2;
    a1.feature = axis1;
    a1.resolution = resolution;
    a2.feature = axis2;
    a2.resolution = resolution;
    return generate_map(engine, a1, a2, fixed_values);
}

std::string map_to_csv(const ReliabilityMap& map, const Schema& evidence_schema,
                       const std::vector<std::string>& comment_lines) {
    std::vector<std::string> columns{evidence_schema.at(map.axis1.feature).name,
                                     evidence_schema.at(map.axis2.feature).name,
                                     "reliability"};
    std::vector<std::vector<double>> rows;
    rows.reserve(map.values.size());
    for (size_t i1 = 0; i1 < map.axis1.resolution; ++i1)
        for (size_t i2 = 0; i2 < map.axis2.resolution; ++i2)
            rows.push_back({map.coord1(i1), map.coord2(i2), map.at(i1, i2)});
    return to_csv(columns, rows, comment_lines);
}

namespace {

// small blue -> yellow heat ramp; value 1 maps to the hot end
struct Rgb {
    unsigned char r, g, b;
};

Rgb heat_color(double v) {
    static constexpr double stops[5][3] = {{0.05, 0.03, 0.35},
                                           {0.23, 0.30, 0.75},
                                           {0.13, 0.57, 0.55},
                                           {0.37, 0.78, 0.38},
                                           {0.99, 0.91, 0.14}};
    v = std::min(1.0, std::max(0.0, v));
    const double x = v * 4.0;
    const size_t k = std::min<size_t>(3, static_cast<size_t>(x));
    const double f = x - static_cast<double>(k);
    Rgb c;
    c.r = static_cast<unsigned char>(255.0 * (stops[k][0] + f * (stops[k + 1][0] - stops[k][0])));
    c.g = static_cast<unsigned char>(255.0 * (stops[k][1] + f * (stops[k + 1][1] - stops[k][1])));
    c.b = static_cast<unsigned char>(255.0 * (stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
    return c;
}

} // namespace

std::string map_to_ppm(const ReliabilityMap& map) {
    const size_t w = map.axis1.resolution;
    const size_t h = map.axis2.resolution;
    std::ostringstream out;
    out << "P6\n" << w << " " << h << "\n255\n";
    for (size_t row = 0; row < h; ++row) {
        const size_t i2 = h - 1 - row; // bottom-left origin
        for (size_t i1 = 0; i1 < w; ++i1) {
            const Rgb c = heat_color(map.at(i1, i2));
            out.put(static_cast<char>(c.r));
            out.put(static_cast<char>(c.g));
            out.put(static_cast<char>(c.b));
        }
    }
    return out.str();
}

} // namespace laddr
