#include "laddr/supervisor.hpp"

#include <cmath>
#include <sstream>

#include "laddr/errors.hpp"
#include "laddr/io_util.hpp"
#include "laddr/version.hpp"

namespace laddr {

StreamSupervisor::StreamSupervisor(const KnowledgeBase& kb, const ReliabilityConfig& config,
                                   const AcceptanceCriterion& criterion)
    : engine_(kb, config), config_(config), criterion_(criterion) {
    criterion_.validate();
}

Decision StreamSupervisor::process(size_t id, std::span<const double> raw_inputs,
                                   std::optional<double> truth,
                                   const PredictorPort& predictor) {
    Decision d;
    d.id = id;
    d.timestamp = static_cast<double>(id);
    ++summary_.samples;
    if (truth) summary_.has_truth = true;

    std::optional<double> prediction;
    try {
        const double value = predictor(raw_inputs);
        if (!std::isfinite(value)) throw ValidationError("predictor returned a non-finite value");
        prediction = value;
    } catch (const std::exception&) {
        d.predictor_error = true;
        ++summary_.predictor_failures;
    }
    d.prediction = prediction;

    if (prediction || engine_.mode() == EvidenceMode::InputsOnly) {
        const auto score = engine_.score_raw(raw_inputs, prediction);
        d.score = score.value;
    }

    // a failed predictor forces rejection regardless of the score
    d.accept = !d.predictor_error && d.score && *d.score >= config_.accept_threshold;
    d.engaged_auxiliary = !d.accept;

    if (prediction && truth) {
        d.correct = std::abs(*prediction - *truth) <= criterion_.epsilon;
        const Outcome o = d.accept ? (*d.correct ? Outcome::AcceptedCorrect
                                                 : Outcome::AcceptedIncorrect)
                                   : (*d.correct ? Outcome::RejectedCorrect
                                                 : Outcome::RejectedIncorrect);
        summary_.counts.add(o);
    }
    return d;
}

void StreamSupervisor::note_malformed(size_t row, std::string message) {
    ++summary_.malformed_rows;
    issues_.push_back(RowIssue{row, std::move(message)});
}

StreamSummary StreamSupervisor::summary() const {
    StreamSummary s = summary_;
    if (s.has_truth) {
        s.peril = peril(s.counts);
        s.degradation = degradation(s.counts);
        s.ineptitude = ineptitude(s.counts);
    }
    return s;
}

StreamResult supervise_stream(const std::vector<StreamSample>& samples,
                              const PredictorPort& predictor, const KnowledgeBase& kb,
                              const ReliabilityConfig& config,
                              const AcceptanceCriterion& criterion) {
    StreamSupervisor supervisor(kb, config, criterion);
    StreamResult result;
    result.decisions.reserve(samples.size());
    for (size_t i = 0; i < samples.size(); ++i)
        result.decisions.push_back(
            supervisor.process(i, samples[i].inputs, samples[i].truth, predictor));
    result.summary = supervisor.summary();
    result.issues = supervisor.issues();
    return result;
}

namespace {
std::string opt_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}
} // namespace

std::string decisions_to_csv(const std::vector<Decision>& decisions,
                             const std::vector<std::optional<double>>& truths,
                             bool has_truth,
                             const std::vector<std::string>& comment_lines) {
    std::ostringstream out;
    for (const auto& c : comment_lines) out << "# " << c << "\n";
    out << "id,score,accept,prediction";
    if (has_truth) out << ",truth,correct";
    out << "\n";
    for (size_t i = 0; i < decisions.size(); ++i) {
        const auto& d = decisions[i];
        out << d.id << "," << opt_field(d.score) << "," << (d.accept ? 1 : 0) << ","
            << opt_field(d.prediction);
        if (has_truth) {
            out << "," << (i < truths.size() ? opt_field(truths[i]) : std::string()) << ",";
            if (d.correct) out << (*d.correct ? 1 : 0);
        }
        out << "\n";
    }
    return out.str();
}

nlohmann::json summary_to_json(const StreamSummary& summary, const ReliabilityConfig& config,
                               const AcceptanceCriterion& criterion) {
    nlohmann::json out = metrics_report(summary.counts, config.accept_threshold,
                                        criterion.epsilon);
    if (!summary.has_truth) {
        out["peril"] = nullptr;
        out["degradation"] = nullptr;
        out["ineptitude"] = nullptr;
    }
    out["samples"] = summary.samples;
    out["has_truth"] = summary.has_truth;
    out["malformed_rows"] = summary.malformed_rows;
    out["predictor_failures"] = summary.predictor_failures;
    out["mode"] = to_string(config.mode);
    out["tool_version"] = kVersion;
    return out;
}

} // namespace laddr
