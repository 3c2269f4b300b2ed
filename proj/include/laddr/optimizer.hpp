#pragma once

#include <optional>
#include <string>
#include <vector>

#include "laddr/knowledge_base.hpp"
#include "laddr/metrics.hpp"
#include "laddr/types.hpp"

namespace laddr {

// One labeled sample: raw inputs, the model's raw prediction, and the raw
// truth value it is judged against.
struct EvaluationSample {
    FeatureVector inputs;
    double prediction = 0.0;
    double truth = 0.0;
};

using EvaluationSet = std::vector<EvaluationSample>;

enum class Objective { Peril, Degradation, Ineptitude };

std::string to_string(Objective o);
Objective objective_from_string(const std::string& s);

// Cartesian diameter grid: one sorted-or-not candidate list per feature. A
// single-value axis freezes that feature's diameter during the search.
struct DiameterGrid {
    std::vector<std::vector<double>> axes;

    static std::vector<double> linspace(double lo, double hi, size_t steps);

    size_t candidate_count() const;
    // Flat enumeration with the first axis slowest, so ascending axis lists
    // enumerate candidates in lexicographic order.
    DiameterVector candidate(size_t flat_index) const;
    void validate() const;
};

struct SearchSpec {
    DiameterGrid grid;
    Objective objective = Objective::Ineptitude;
};

struct CandidateResult {
    DiameterVector diameters;
    ConfusionCounts counts;
    std::optional<double> peril;
    std::optional<double> degradation;
    std::optional<double> ineptitude;

    std::optional<double> objective_value(Objective o) const;
};

// Scores every evaluation sample under the candidate diameters (decay
// structure solved per the config's threshold, evidence mode per config),
// classifies, and tallies. Deterministic.
CandidateResult evaluate_candidate(const KnowledgeBase& kb, const DiameterVector& diameters,
                                   const EvaluationSet& eval, const ReliabilityConfig& config,
                                   const AcceptanceCriterion& criterion);

struct OptimizationResult {
    CandidateResult best;
    size_t best_index = 0;              // position in the trace
    std::vector<CandidateResult> trace; // every candidate, in grid order
};

// Exhaustive evaluation of the whole grid. Candidates whose objective is
// undefined are excluded from the argmin; ties go to the lexicographically
// smallest diameter vector. Errors if every candidate is undefined.
// `threads` = 0 picks the hardware concurrency; the trace order is grid
// order regardless of scheduling.
OptimizationResult optimize(const KnowledgeBase& kb, const SearchSpec& spec,
                            const EvaluationSet& eval, const ReliabilityConfig& config,
                            const AcceptanceCriterion& criterion, unsigned threads = 0);

// One row per candidate: diameters, tallies, all three metrics (undefined
// metrics serialize as nan).
std::string trace_to_csv(const std::vector<CandidateResult>& trace,
                         const std::vector<std::string>& feature_names,
                         const std::vector<std::string>& comment_lines = {});

} // namespace laddr
