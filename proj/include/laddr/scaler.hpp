#pragma once

#include <vector>

#include "laddr/types.hpp"

namespace laddr {

// Per-feature min-max scaler in raw engineering units. Bounds come from the
// knowledge-base build rows; values outside them normalize outside [0,1],
// which is legal input everywhere downstream (those are the extrapolation
// cases the scorer exists to flag).
class MinMaxScaler {
public:
    MinMaxScaler(std::vector<double> mins, std::vector<double> maxs);

    // Column-wise bounds of `rows`. Throws on a constant column (max == min):
    // normalization would be undefined.
    static MinMaxScaler fit(const std::vector<std::vector<double>>& rows,
                            const std::vector<std::string>& column_names);

    size_t dimension() const { return mins_.size(); }
    const std::vector<double>& mins() const { return mins_; }
    const std::vector<double>& maxs() const { return maxs_; }

    double normalize(size_t feature, double raw) const;
    double denormalize(size_t feature, double value) const;

    FeatureVector normalize(const FeatureVector& raw) const;
    FeatureVector denormalize(const FeatureVector& values) const;

    MinMaxScaler subset(const std::vector<size_t>& indices) const;

    bool operator==(const MinMaxScaler& other) const {
        return mins_ == other.mins_ && maxs_ == other.maxs_;
    }

private:
    std::vector<double> mins_;
    std::vector<double> maxs_;
};

} // namespace laddr
