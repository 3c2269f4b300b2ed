#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "laddr/metrics.hpp"
#include "laddr/reliability.hpp"
#include "laddr/types.hpp"

namespace laddr {

// Any memoryless model: raw input features in, one raw prediction out. Must
// be deterministic for fixed inputs within a session so decision logs replay
// byte-identically.
using PredictorPort = std::function<double(std::span<const double>)>;

struct StreamSample {
    FeatureVector inputs; // raw units, schema input order
    std::optional<double> truth;
};

// Per-sample verdict. Rejection only flags the auxiliary path; the
// prediction itself is still recorded.
struct Decision {
    size_t id = 0;           // position in the input stream
    double timestamp = 0.0;  // logical stream time (= id at unit rate)
    std::optional<double> score; // absent when the predictor failed and the
                                 // evidence mode needs its output to score
    bool accept = false;
    std::optional<double> prediction; // raw; absent on predictor failure
    std::optional<bool> correct;      // present only when truth is supplied
    bool engaged_auxiliary = false;   // always == !accept
    bool predictor_error = false;
};

struct RowIssue {
    size_t row = 0;
    std::string message;
};

struct StreamSummary {
    size_t samples = 0;
    size_t malformed_rows = 0;
    size_t predictor_failures = 0;
    bool has_truth = false;
    ConfusionCounts counts; // only rows with both prediction and truth
    std::optional<double> peril;
    std::optional<double> degradation;
    std::optional<double> ineptitude;
};

// Incremental runtime around one engine: score, gate, tally. Decisions come
// back in call order; the caller owns ordering across threads (the decision
// log is single-writer).
class StreamSupervisor {
public:
    StreamSupervisor(const KnowledgeBase& kb, const ReliabilityConfig& config,
                     const AcceptanceCriterion& criterion);

    Decision process(size_t id, std::span<const double> raw_inputs,
                     std::optional<double> truth, const PredictorPort& predictor);
    void note_malformed(size_t row, std::string message);

    const ReliabilityEngine& engine() const { return engine_; }
    StreamSummary summary() const;
    const std::vector<RowIssue>& issues() const { return issues_; }

private:
    ReliabilityEngine engine_;
    ReliabilityConfig config_;
    AcceptanceCriterion criterion_;
    StreamSummary summary_;
    std::vector<RowIssue> issues_;
};

struct StreamResult {
    std::vector<Decision> decisions; // input order
    StreamSummary summary;
    std::vector<RowIssue> issues;
};

StreamResult supervise_stream(const std::vector<StreamSample>& samples,
                              const PredictorPort& predictor, const KnowledgeBase& kb,
                              const ReliabilityConfig& config,
                              const AcceptanceCriterion& criterion);

// Decision log CSV: id, score, accept, prediction [, truth, correct]. Absent
// values are empty fields.
std::string decisions_to_csv(const std::vector<Decision>& decisions,
                             const std::vector<std::optional<double>>& truths,
                             bool has_truth,
                             const std::vector<std::string>& comment_lines = {});

nlohmann::json summary_to_json(const StreamSummary& summary, const ReliabilityConfig& config,
                               const AcceptanceCriterion& criterion);

} // namespace laddr
