#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "laddr/scaler.hpp"
#include "laddr/types.hpp"

namespace laddr {

struct KbMetadata {
    std::string source;       // label for where the rows came from
    std::string created;      // caller-supplied timestamp ("" = unstated)
    std::string build_config; // resolved build configuration as JSON text ("" = none)
};

// Immutable set of normalized training points with the scaler that produced
// them. Build once, share freely across threads.
class KnowledgeBase {
public:
    // Fits the scaler to the raw rows and stores every row normalized, in
    // input order. Rejects empty input, width mismatches, non-finite values
    // (reported with row and column), and constant columns.
    static KnowledgeBase from_raw(Schema schema,
                                  const std::vector<std::vector<double>>& raw_rows,
                                  KbMetadata metadata = {});

    // Adopts already-normalized points under an explicit scaler. Used by file
    // loading and by callers that define the coordinate system themselves.
    static KnowledgeBase from_normalized(Schema schema, MinMaxScaler scaler,
                                         std::vector<FeatureVector> points,
                                         KbMetadata metadata = {});

    const Schema& schema() const { return schema_; }
    const MinMaxScaler& scaler() const { return scaler_; }
    const std::vector<FeatureVector>& points() const { return points_; }
    const KbMetadata& metadata() const { return metadata_; }

    size_t size() const { return points_.size(); }
    size_t dimension() const { return schema_.size(); }

    // View with only the input features (schema, scaler, and point columns
    // restricted). No-op copy when there is no target feature.
    KnowledgeBase project_inputs() const;

    // Persists as <base>.kb.json (header) + <base>.kb.csv (points). `base`
    // may be given with or without the .kb.json suffix.
    void save(const std::filesystem::path& base) const;
    static KnowledgeBase load(const std::filesystem::path& json_path);

private:
    KnowledgeBase(Schema schema, MinMaxScaler scaler,
                  std::vector<FeatureVector> points, KbMetadata metadata);

    Schema schema_;
    MinMaxScaler scaler_;
    std::vector<FeatureVector> points_;
    KbMetadata metadata_;
};

} // namespace laddr
