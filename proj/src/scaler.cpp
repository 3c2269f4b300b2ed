#include "laddr/scaler.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "laddr/errors.hpp"

namespace laddr {

MinMaxScaler::MinMaxScaler(std::vector<double> mins, std::vector<double> maxs)
    : mins_(std::move(mins)), maxs_(std::move(maxs)) {
    if (mins_.empty() || mins_.size() != maxs_.size())
        throw ValidationError("scaler: bound vectors empty or of unequal length");
    for (size_t i = 0; i < mins_.size(); ++i) {
        if (!std::isfinite(mins_[i]) || !std::isfinite(maxs_[i]))
            throw ValidationError("scaler: non-finite bound");
        if (!(maxs_[i] > mins_[i])) {
            std::ostringstream msg;
            msg << "scaler: feature " << i << " has max <= min";
            throw ValidationError(msg.str());
        }
    }
}

MinMaxScaler MinMaxScaler::fit(const std::vector<std::vector<double>>& rows,
                               const std::vector<std::string>& column_names) {
    if (rows.empty()) throw ValidationError("scaler fit: empty input");
    const size_t dim = rows.front().size();
    std::vector<double> mins(dim, std::numeric_limits<double>::infinity());
    std::vector<double> maxs(dim, -std::numeric_limits<double>::infinity());
    for (const auto& row : rows) {
        for (size_t c = 0; c < dim; ++c) {
            mins[c] = std::min(mins[c], row[c]);
            maxs[c] = std::max(maxs[c], row[c]);
        }
    }
    for (size_t c = 0; c < dim; ++c) {
        if (maxs[c] == mins[c]) {
            std::ostringstream msg;
            msg << "constant column";
            if (c < column_names.size()) msg << " '" << column_names[c] << "'";
            msg << " (index " << c << "): min == max, normalization undefined";
            throw ValidationError(msg.str());
        }
    }
    return MinMaxScaler(std::move(mins), std::move(maxs));
}

double MinMaxScaler::normalize(size_t feature, double raw) const {
    return (raw - mins_[feature]) / (maxs_[feature] - mins_[feature]);
}

double MinMaxScaler::denormalize(size_t feature, double value) const {
    return mins_[feature] + value * (maxs_[feature] - mins_[feature]);
}

FeatureVector MinMaxScaler::normalize(const FeatureVector& raw) const {
    require_dimension(raw, dimension(), "scaler normalize");
    FeatureVector out(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) out[i] = normalize(i, raw[i]);
    return out;
}

FeatureVector MinMaxScaler::denormalize(const FeatureVector& values) const {
    require_dimension(values, dimension(), "scaler denormalize");
    FeatureVector out(values.size());
    for (size_t i = 0; i < values.size(); ++i) out[i] = denormalize(i, values[i]);
    return out;
}

MinMaxScaler MinMaxScaler::subset(const std::vector<size_t>& indices) const {
    std::vector<double> mins, maxs;
    mins.reserve(indices.size());
    maxs.reserve(indices.size());
    for (size_t i : indices) {
        if (i >= dimension()) throw ValidationError("scaler subset: index out of range");
        mins.push_back(mins_[i]);
        maxs.push_back(maxs_[i]);
    }
    return MinMaxScaler(std::move(mins), std::move(maxs));
}

} // namespace laddr
