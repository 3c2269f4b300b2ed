#include "laddr/metrics.hpp"

#include <cmath>

#include "laddr/errors.hpp"

namespace laddr {

void ConfusionCounts::add(Outcome o) {
    switch (o) {
        case Outcome::AcceptedCorrect: ++accepted_correct; break;
        case Outcome::AcceptedIncorrect: ++accepted_incorrect; break;
        case Outcome::RejectedCorrect: ++rejected_correct; break;
        case Outcome::RejectedIncorrect: ++rejected_incorrect; break;
    }
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
    accepted_correct += other.accepted_correct;
    accepted_incorrect += other.accepted_incorrect;
    rejected_correct += other.rejected_correct;
    rejected_incorrect += other.rejected_incorrect;
    return *this;
}

Outcome classify(double prediction, double truth, double score_value,
                 double accept_threshold, const AcceptanceCriterion& criterion) {
    if (!std::isfinite(prediction) || !std::isfinite(truth) || !std::isfinite(score_value))
        throw ValidationError("classify: non-finite input");
    criterion.validate();
    const bool accept = score_value >= accept_threshold;
    const bool correct = std::abs(prediction - truth) <= criterion.epsilon;
    if (accept) return correct ? Outcome::AcceptedCorrect : Outcome::AcceptedIncorrect;
    return correct ? Outcome::RejectedCorrect : Outcome::RejectedIncorrect;
}

Outcome classify(double prediction, double truth, double score_value,
                 const ReliabilityConfig& config, const AcceptanceCriterion& criterion) {
    return classify(prediction, truth, score_value, config.accept_threshold, criterion);
}

std::optional<double> degradation(const ConfusionCounts& c) {
    const uint64_t denom = c.rejected_correct + c.accepted_correct;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(c.rejected_correct) / static_cast<double>(denom);
}

std::optional<double> peril(const ConfusionCounts& c) {
    const uint64_t denom = c.accepted_incorrect + c.accepted_correct;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(c.accepted_incorrect) / static_cast<double>(denom);
}

std::optional<double> ineptitude(const ConfusionCounts& c) {
    const uint64_t denom = c.total();
    if (denom == 0) return std::nullopt;
    return static_cast<double>(c.rejected_correct + c.accepted_incorrect) /
           static_cast<double>(denom);
}

namespace {
nlohmann::json opt_json(std::optional<double> v) {
    if (v) return *v;
    return nullptr;
}
} // namespace

nlohmann::json metrics_report(const ConfusionCounts& c, std::optional<double> threshold,
                              std::optional<double> epsilon) {
    nlohmann::json out;
    out["counts"] = {{"A_o", c.accepted_correct},
                     {"A_x", c.accepted_incorrect},
                     {"R_o", c.rejected_correct},
                     {"R_x", c.rejected_incorrect}};
    out["peril"] = opt_json(peril(c));
    out["degradation"] = opt_json(degradation(c));
    out["ineptitude"] = opt_json(ineptitude(c));
    out["threshold"] = opt_json(threshold);
    out["epsilon"] = opt_json(epsilon);
    return out;
}

} // namespace laddr
