#include "laddr/types.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "laddr/errors.hpp"

namespace laddr {

void require_finite(const FeatureVector& v, const std::string& what) {
    for (size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            std::ostringstream msg;
            msg << what << ": non-finite value at position " << i;
            throw ValidationError(msg.str());
        }
    }
}

void require_dimension(const FeatureVector& v, size_t dim, const std::string& what) {
    if (v.size() != dim) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch (got " << v.size() << ", expected " << dim << ")";
        throw ValidationError(msg.str());
    }
}

Schema::Schema(std::vector<Feature> features) : features_(std::move(features)) {
    if (features_.empty()) throw ValidationError("schema: no features");
    std::set<std::string> seen;
    for (size_t i = 0; i < features_.size(); ++i) {
        const auto& f = features_[i];
        if (f.name.empty()) throw ValidationError("schema: empty feature name");
        if (!seen.insert(f.name).second)
            throw ValidationError("schema: duplicate feature name '" + f.name + "'");
        if (f.role == FeatureRole::Target) {
            if (target_index_)
                throw ValidationError("schema: more than one target feature");
            target_index_ = i;
        } else {
            input_indices_.push_back(i);
        }
    }
    if (input_indices_.empty()) throw ValidationError("schema: no input features");
}

std::vector<std::string> Schema::names() const {
    std::vector<std::string> out;
    out.reserve(features_.size());
    for (const auto& f : features_) out.push_back(f.name);
    return out;
}

std::optional<size_t> Schema::index_of(const std::string& name) const {
    for (size_t i = 0; i < features_.size(); ++i)
        if (features_[i].name == name) return i;
    return std::nullopt;
}

bool Schema::operator==(const Schema& other) const {
    if (features_.size() != other.features_.size()) return false;
    for (size_t i = 0; i < features_.size(); ++i)
        if (features_[i].name != other.features_[i].name ||
            features_[i].role != other.features_[i].role)
            return false;
    return true;
}

void DiameterVector::validate() const {
    if (values.empty()) throw ValidationError("diameters: empty");
    for (size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]) || values[i] <= 0.0) {
            std::ostringstream msg;
            msg << "diameters: entry " << i << " must be finite and > 0";
            throw ValidationError(msg.str());
        }
}

void CovarianceStructure::validate() const {
    if (decay_rates.empty()) throw ValidationError("covariance structure: empty");
    for (size_t i = 0; i < decay_rates.size(); ++i)
        if (!std::isfinite(decay_rates[i]) || decay_rates[i] <= 0.0) {
            std::ostringstream msg;
            msg << "covariance structure: entry " << i << " must be finite and > 0";
            throw ValidationError(msg.str());
        }
}

std::string to_string(EvidenceMode mode) {
    return mode == EvidenceMode::InputsOnly ? "inputs" : "inputs+target";
}

EvidenceMode evidence_mode_from_string(const std::string& s) {
    if (s == "inputs" || s == "input-only" || s == "inputs-only")
        return EvidenceMode::InputsOnly;
    if (s == "inputs+target" || s == "input+target" || s == "full")
        return EvidenceMode::InputsPlusTarget;
    throw ValidationError("unknown evidence mode: '" + s + "' (use 'inputs' or 'inputs+target')");
}

void ReliabilityConfig::validate(size_t schema_size) const {
    diameters.validate();
    if (diameters.size() != schema_size) {
        std::ostringstream msg;
        msg << "config: " << diameters.size() << " diameters for a "
            << schema_size << "-feature schema";
        throw ValidationError(msg.str());
    }
    if (!(decay_threshold > 0.0 && decay_threshold < 1.0))
        throw ValidationError("config: decay threshold must lie in (0,1)");
    if (!(accept_threshold > 0.0 && accept_threshold < 1.0))
        throw ValidationError("config: accept threshold must lie in (0,1)");
}

void AcceptanceCriterion::validate() const {
    if (!std::isfinite(epsilon) || epsilon <= 0.0)
        throw ValidationError("acceptance criterion: epsilon must be finite and > 0");
}

} // namespace laddr
