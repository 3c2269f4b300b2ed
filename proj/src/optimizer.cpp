#include "laddr/optimizer.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "laddr/csv.hpp"
#include "laddr/errors.hpp"
#include "laddr/reliability.hpp"

namespace laddr {

std::string to_string(Objective o) {
    switch (o) {
        case Objective::Peril: return "peril";
        case Objective::Degradation: return "degradation";
        case Objective::Ineptitude: return "ineptitude";
    }
    return "?";
}

Objective objective_from_string(const std::string& s) {
    if (s == "peril") return Objective::Peril;
    if (s == "degradation") return Objective::Degradation;
    if (s == "ineptitude") return Objective::Ineptitude;
    throw ValidationError("unknown objective: '" + s +
                          "' (use peril, degradation, or ineptitude)");
}

std::vector<double> DiameterGrid::linspace(double lo, double hi, size_t steps) {
    if (steps < 1) throw ValidationError("grid axis: steps must be >= 1");
    if (!(lo > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
        throw ValidationError("grid axis: bounds must be finite and > 0");
    if (hi < lo) throw ValidationError("grid axis: max < min");
    if (steps == 1) return {lo};
    std::vector<double> out(steps);
    for (size_t i = 0; i < steps; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    return out;
}

void DiameterGrid::validate() const {
    if (axes.empty()) throw ValidationError("grid: no axes");
    for (const auto& axis : axes) {
        if (axis.empty()) throw ValidationError("grid: empty axis");
        for (double v : axis)
            if (!std::isfinite(v) || v <= 0.0)
                throw ValidationError("grid: candidate diameters must be finite and > 0");
    }
}

size_t DiameterGrid::candidate_count() const {
    size_t n = 1;
    for (const auto& axis : axes) n *= axis.size();
    return n;
}

DiameterVector DiameterGrid::candidate(size_t flat_index) const {
    DiameterVector out;
    out.values.resize(axes.size());
    size_t rem = flat_index;
    for (size_t a = axes.size(); a-- > 0;) {
        out.values[a] = axes[a][rem % axes[a].size()];
        rem /= axes[a].size();
    }
    return out;
}

std::optional<double> CandidateResult::objective_value(Objective o) const {
    switch (o) {
        case Objective::Peril: return peril;
        case Objective::Degradation: return degradation;
        case Objective::Ineptitude: return ineptitude;
    }
    return std::nullopt;
}

CandidateResult evaluate_candidate(const KnowledgeBase& kb, const DiameterVector& diameters,
                                   const EvaluationSet& eval, const ReliabilityConfig& config,
                                   const AcceptanceCriterion& criterion) {
    if (eval.empty()) throw ValidationError("evaluate: empty evaluation set");
    ReliabilityConfig candidate_config = config;
    candidate_config.diameters = diameters;
    ReliabilityEngine engine(kb, candidate_config);

    CandidateResult result;
    result.diameters = diameters;
    for (const auto& sample : eval) {
        const auto score = engine.score_raw(sample.inputs, sample.prediction);
        result.counts.add(classify(sample.prediction, sample.truth, score.value,
                                   candidate_config, criterion));
    }
    result.peril = peril(result.counts);
    result.degradation = degradation(result.counts);
    result.ineptitude = ineptitude(result.counts);
    return result;
}

namespace {

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

} // namespace

OptimizationResult optimize(const KnowledgeBase& kb, const SearchSpec& spec,
                            const EvaluationSet& eval, const ReliabilityConfig& config,
                            const AcceptanceCriterion& criterion, unsigned threads) {
    spec.grid.validate();
    if (spec.grid.axes.size() != kb.dimension())
        throw ValidationError("optimize: grid axis count must match the schema");
    const size_t total = spec.grid.candidate_count();

    OptimizationResult result;
    result.trace.resize(total);

    unsigned workers = threads ? threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<size_t>(workers, total));

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= total || failed.load()) return;
            try {
                result.trace[i] = evaluate_candidate(kb, spec.grid.candidate(i), eval,
                                                     config, criterion);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = e.what();
                return;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw ValidationError("optimize: candidate evaluation failed: " + first_error);

    // argmin over defined objectives, ties to the lexicographically smallest
    // diameter vector
    std::optional<size_t> best;
    for (size_t i = 0; i < total; ++i) {
        const auto value = result.trace[i].objective_value(spec.objective);
        if (!value) continue;
        if (!best) {
            best = i;
            continue;
        }
        const double current = *result.trace[*best].objective_value(spec.objective);
        if (*value < current ||
            (*value == current &&
             lex_less(result.trace[i].diameters.values, result.trace[*best].diameters.values)))
            best = i;
    }
    if (!best)
        throw NumericError("optimize: the objective is undefined for every grid candidate");
    result.best_index = *best;
    result.best = result.trace[*best];
    return result;
}

std::string trace_to_csv(const std::vector<CandidateResult>& trace,
                         const std::vector<std::string>& feature_names,
                         const std::vector<std::string>& comment_lines) {
    std::vector<std::string> columns;
    for (const auto& name : feature_names) columns.push_back("diameter_" + name);
    for (const char* c : {"A_o", "A_x", "R_o", "R_x", "peril", "degradation", "ineptitude"})
        columns.emplace_back(c);

    const double undefined = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<double>> rows;
    rows.reserve(trace.size());
    for (const auto& cand : trace) {
        std::vector<double> row = cand.diameters.values;
        row.push_back(static_cast<double>(cand.counts.accepted_correct));
        row.push_back(static_cast<double>(cand.counts.accepted_incorrect));
        row.push_back(static_cast<double>(cand.counts.rejected_correct));
        row.push_back(static_cast<double>(cand.counts.rejected_incorrect));
        row.push_back(cand.peril.value_or(undefined));
        row.push_back(cand.degradation.value_or(undefined));
        row.push_back(cand.ineptitude.value_or(undefined));
        rows.push_back(std::move(row));
    }
    return to_csv(columns, rows, comment_lines);
}

} // namespace laddr
