#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace laddr {

// All coordinates downstream of a knowledge base are min-max normalized;
// feature vectors are plain double rows validated at module boundaries.
using FeatureVector = std::vector<double>;

void require_finite(const FeatureVector& v, const std::string& what);
void require_dimension(const FeatureVector& v, size_t dim, const std::string& what);

enum class FeatureRole { Input, Target };

struct Feature {
    std::string name;
    FeatureRole role = FeatureRole::Input;
};

// Ordered feature list. At most one target feature; evidence modes that use
// the prediction as a coordinate require exactly one.
class Schema {
public:
    explicit Schema(std::vector<Feature> features);

    size_t size() const { return features_.size(); }
    const Feature& at(size_t i) const { return features_[i]; }
    const std::vector<Feature>& features() const { return features_; }

    const std::vector<size_t>& input_indices() const { return input_indices_; }
    std::optional<size_t> target_index() const { return target_index_; }

    std::vector<std::string> names() const;
    std::optional<size_t> index_of(const std::string& name) const;

    bool operator==(const Schema& other) const;

private:
    std::vector<Feature> features_;
    std::vector<size_t> input_indices_;
    std::optional<size_t> target_index_;
};

// Per-feature extrapolation diameters, in normalized units: the width over
// which a lone training point's reliability falls to the decay threshold.
struct DiameterVector {
    std::vector<double> values;

    size_t size() const { return values.size(); }
    void validate() const; // all entries finite and > 0
};

// Diagonal of the decay-structure matrix: one decay rate per feature axis.
// This is a tuning structure, not the covariance of any dataset.
struct CovarianceStructure {
    std::vector<double> decay_rates;

    size_t size() const { return decay_rates.size(); }
    void validate() const; // all entries finite and > 0
    bool operator==(const CovarianceStructure& other) const {
        return decay_rates == other.decay_rates;
    }
};

enum class EvidenceMode {
    InputsOnly,       // score against input features only
    InputsPlusTarget, // the prediction joins the query as the target coordinate
};

std::string to_string(EvidenceMode mode);
EvidenceMode evidence_mode_from_string(const std::string& s);

struct ReliabilityConfig {
    DiameterVector diameters;      // one per knowledge-base schema feature
    double decay_threshold = 0.2;  // reliability at the extrapolation radius
    double accept_threshold = 0.5; // accept iff score >= this
    EvidenceMode mode = EvidenceMode::InputsPlusTarget;

    void validate(size_t schema_size) const;
};

// Correctness band for predictions, in raw target units.
struct AcceptanceCriterion {
    double epsilon = 0.0;

    void validate() const;
};

} // namespace laddr
