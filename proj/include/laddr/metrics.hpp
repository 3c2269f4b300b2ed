#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "laddr/types.hpp"

namespace laddr {

enum class Outcome {
    AcceptedCorrect,
    AcceptedIncorrect,
    RejectedCorrect,
    RejectedIncorrect,
};

// The four tallies behind the stakeholder metrics. Tallying is associative:
// shard, then sum.
struct ConfusionCounts {
    uint64_t accepted_correct = 0;   // A_o
    uint64_t accepted_incorrect = 0; // A_x
    uint64_t rejected_correct = 0;   // R_o
    uint64_t rejected_incorrect = 0; // R_x

    uint64_t total() const {
        return accepted_correct + accepted_incorrect + rejected_correct + rejected_incorrect;
    }
    void add(Outcome o);
    ConfusionCounts& operator+=(const ConfusionCounts& other);
};

// Accept iff score >= accept_threshold (a score exactly at the boundary is
// accepted); correct iff |prediction - truth| <= epsilon, in raw units.
Outcome classify(double prediction, double truth, double score_value,
                 double accept_threshold, const AcceptanceCriterion& criterion);
Outcome classify(double prediction, double truth, double score_value,
                 const ReliabilityConfig& config, const AcceptanceCriterion& criterion);

// Zero denominators make a metric undefined; that is surfaced as nullopt,
// never coerced to 0 or 1, so comparisons can exclude it.

// Fraction of correct predictions that were rejected: R_o / (R_o + A_o).
std::optional<double> degradation(const ConfusionCounts& c);

// Fraction of accepted predictions that were incorrect: A_x / (A_x + A_o).
std::optional<double> peril(const ConfusionCounts& c);

// Fraction of all filtered predictions handled wrongly (correct-but-rejected
// plus incorrect-but-accepted): (R_o + A_x) / total.
std::optional<double> ineptitude(const ConfusionCounts& c);

nlohmann::json metrics_report(const ConfusionCounts& c,
                              std::optional<double> threshold = std::nullopt,
                              std::optional<double> epsilon = std::nullopt);

} // namespace laddr
