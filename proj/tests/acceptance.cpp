// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every tolerance is pinned here, in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "laddr/casestudy.hpp"
#include "laddr/covariance.hpp"
#include "laddr/index.hpp"
#include "laddr/knowledge_base.hpp"
#include "laddr/metrics.hpp"
#include "laddr/optimizer.hpp"
#include "laddr/random.hpp"
#include "laddr/reliability.hpp"
#include "laddr/supervisor.hpp"

using namespace laddr;

namespace {

int failures = 0;

void report(int criterion, const char* label, bool pass, const std::string& detail = "") {
    std::printf("[%s] %d %s%s%s\n", pass ? "PASS" : "FAIL", criterion, label,
                detail.empty() ? "" : ": ", detail.c_str());
    if (!pass) ++failures;
}

double median(std::vector<double> v) {
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
        m = 0.5 * (m + v[mid - 1]);
    }
    return m;
}

// --------------------------------------------------------------------------
// 1. metric arithmetic on the reference tallies
// --------------------------------------------------------------------------
void criterion_1() {
    struct Case {
        ConfusionCounts c;
        double peril_pct, degr_pct, inept_pct;
    };
    std::vector<Case> cases;
    {
        ConfusionCounts a;
        a.accepted_correct = 13825;
        a.rejected_incorrect = 4084;
        a.accepted_incorrect = 635;
        a.rejected_correct = 931;
        cases.push_back({a, 4.4, 6.3, 8.04});
        ConfusionCounts b;
        b.accepted_correct = 6865;
        b.rejected_incorrect = 3487;
        b.accepted_incorrect = 400;
        b.rejected_correct = 3783;
        cases.push_back({b, 5.5, 35.5, 28.8});
    }
    bool pass = true;
    std::string detail;
    for (const auto& k : cases) {
        const double p = *peril(k.c) * 100.0;
        const double d = *degradation(k.c) * 100.0;
        const double f = *ineptitude(k.c) * 100.0;
        // +/- 0.1 percentage points
        if (std::abs(p - k.peril_pct) > 0.1 || std::abs(d - k.degr_pct) > 0.1 ||
            std::abs(f - k.inept_pct) > 0.1) {
            pass = false;
            char buf[128];
            std::snprintf(buf, sizeof(buf), "got %.3f%%/%.3f%%/%.3f%%", p, d, f);
            detail = buf;
        }
    }
    report(1, "confusion-metric arithmetic on reference tallies", pass, detail);
}

// --------------------------------------------------------------------------
// 2. decay anchor: radius scores the threshold, the point scores one
// --------------------------------------------------------------------------
void criterion_2() {
    auto kb = KnowledgeBase::from_normalized(Schema({{"x", FeatureRole::Input}}),
                                             MinMaxScaler({0.0}, {1.0}), {{0.5}});
    ReliabilityConfig cfg;
    cfg.diameters = DiameterVector{{0.36}};
    cfg.decay_threshold = 0.2;
    cfg.mode = EvidenceMode::InputsOnly;
    ReliabilityEngine engine(kb, cfg);
    const double hi = engine.score_normalized(FeatureVector{0.68}).value;
    const double lo = engine.score_normalized(FeatureVector{0.32}).value;
    const double at = engine.score_normalized(FeatureVector{0.5}).value;
    const bool pass = std::abs(hi - 0.2) <= 1e-9 && std::abs(lo - 0.2) <= 1e-9 && at == 1.0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "score(0.68)=%.12f score(0.32)=%.12f score(0.5)=%g", hi,
                  lo, at);
    report(2, "reliability anchor at the extrapolation radius", pass, buf);
}

// --------------------------------------------------------------------------
// 3. pump ramp endpoints and midpoint
// --------------------------------------------------------------------------
void criterion_3() {
    TransientProfile p;
    p.ramp_duration = 467.81;
    p.end_fraction = 0.516;
    p.steps = 100;
    const double start = pump_speed(p.start_time, p);
    const double end = pump_speed(p.start_time + p.ramp_duration, p);
    const double mid = pump_speed(p.start_time + p.ramp_duration / 2.0, p);
    const bool pass =
        start == 1.0 && end == 0.516 && std::abs(mid - 0.758) <= 1e-12;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "start=%g end=%g mid=%.15f", start, end, mid);
    report(3, "pump ramp endpoints and midpoint", pass, buf);
}

// --------------------------------------------------------------------------
// 4. exact-index oracle equivalence, dimensions 1..5, >= 10,000 trials
// --------------------------------------------------------------------------
void criterion_4() {
    std::mt19937_64 rng(424242);
    size_t trials = 0;
    double worst = 0.0;
    for (size_t dim = 1; dim <= 5; ++dim) {
        for (int config = 0; config < 10; ++config) {
            const size_t n = 50 + static_cast<size_t>(rng() % 350);
            std::vector<FeatureVector> pts(n, FeatureVector(dim));
            for (auto& p : pts)
                for (auto& v : p) v = uniform_in(rng, -0.2, 1.2);
            CovarianceStructure cov;
            cov.decay_rates.resize(dim);
            for (auto& r : cov.decay_rates) {
                const double root = uniform_in(rng, 0.05, 2.0);
                r = root * root;
            }
            const NeighborIndex index(pts, cov);
            for (int q = 0; q < 200; ++q) {
                FeatureVector query(dim);
                for (auto& v : query) v = uniform_in(rng, -0.5, 1.5);
                const auto fast = index.nearest(query);
                const auto slow = brute_force_nearest(pts, cov, query);
                worst = std::max(worst, std::abs(fast.distance - slow.distance));
                ++trials;
            }
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%zu trials, worst |tree - scan| = %.3e", trials, worst);
    report(4, "index distances equal the brute-force oracle", trials >= 10000 && worst <= 1e-12,
           buf);
}

// shared desk-scale study pipeline, built once
struct Study {
    StudyDatasets data;
    KnowledgeBase kb;
    PolynomialPredictor predictor;
    EvaluationSet train_eval;
    AcceptanceCriterion criterion{0.02};
    ReliabilityConfig base_config;
};

Study build_study() {
    StudyConfig cfg;
    cfg.seed = 2024;
    auto data = build_datasets(cfg);

    // knowledge base: every 4th sample of the train episodes, so the train
    // rows themselves still exercise interpolation
    std::vector<std::vector<double>> kb_rows;
    const auto train_rows = data.feature_rows(data.d1_train);
    for (size_t r = 0; r < train_rows.size(); r += 4) kb_rows.push_back(train_rows[r]);
    auto kb = KnowledgeBase::from_raw(data.schema, kb_rows, {"study-train", ""});

    auto predictor = PolynomialPredictor::fit(train_rows, 1);
    EvaluationSet train_eval;
    for (const auto& row : train_rows) {
        EvaluationSample s;
        s.inputs = {row[0], row[1]};
        s.truth = row[2];
        s.prediction = predictor(s.inputs);
        train_eval.push_back(std::move(s));
    }

    ReliabilityConfig base;
    base.diameters = DiameterVector{{0.05, 0.05, 0.05}};
    base.mode = EvidenceMode::InputsPlusTarget;
    return Study{std::move(data), std::move(kb), std::move(predictor),
                 std::move(train_eval), AcceptanceCriterion{0.02}, base};
}

// --------------------------------------------------------------------------
// 5. monotonicity: per-axis diameter ladders and global degradation
// --------------------------------------------------------------------------
void criterion_5(const Study& study) {
    bool pass_a = true;
    {
        std::mt19937_64 rng(55);
        std::vector<FeatureVector> queries;
        for (int q = 0; q < 5; ++q)
            queries.push_back({uniform_in(rng, -0.1, 1.1), uniform_in(rng, -0.1, 1.1),
                               uniform_in(rng, -0.1, 1.1)});
        for (size_t axis = 0; axis < 3 && pass_a; ++axis) {
            for (const auto& query : queries) {
                std::vector<double> diam{0.02, 0.02, 0.02};
                double prev = 0.0;
                for (int step = 0; step < 10; ++step) {
                    ReliabilityConfig cfg = study.base_config;
                    cfg.diameters = DiameterVector{diam};
                    ReliabilityEngine engine(study.kb, cfg);
                    const double v = engine.score_normalized(query).value;
                    if (v < prev) pass_a = false;
                    prev = v;
                    diam[axis] *= 1.5;
                }
            }
        }
    }

    bool pass_b = true;
    std::string detail_b;
    {
        double prev = 2.0; // above any possible degradation
        for (double c : {1.0, 1.5, 2.0, 4.0}) {
            DiameterVector diam{{0.05 * c, 0.05 * c, 0.05 * c}};
            const auto result = evaluate_candidate(study.kb, diam, study.train_eval,
                                                   study.base_config, study.criterion);
            if (!result.degradation || *result.degradation > prev + 1e-15) pass_b = false;
            if (result.degradation) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%s%.4f", detail_b.empty() ? "" : " -> ",
                              *result.degradation);
                detail_b += buf;
                prev = *result.degradation;
            }
        }
    }
    report(5, "monotonicity of score in diameters and degradation in scale",
           pass_a && pass_b, "degradation ladder " + detail_b);
}

// --------------------------------------------------------------------------
// 6. range, exactness at data, metric axioms
// --------------------------------------------------------------------------
void criterion_6() {
    std::mt19937_64 rng(66);
    bool pass = true;
    std::string detail;

    std::vector<FeatureVector> pts;
    for (int i = 0; i < 60; ++i)
        pts.push_back({uniform01(rng), uniform01(rng), uniform01(rng)});
    auto kb = KnowledgeBase::from_normalized(
        Schema({{"a", FeatureRole::Input}, {"b", FeatureRole::Input}, {"c", FeatureRole::Input}}),
        MinMaxScaler({0, 0, 0}, {1, 1, 1}), pts);
    ReliabilityConfig cfg;
    cfg.diameters = DiameterVector{{0.3, 0.2, 0.4}};
    cfg.mode = EvidenceMode::InputsOnly;
    ReliabilityEngine engine(kb, cfg);

    // range, and score 1 exactly on stored points
    for (const auto& p : pts)
        if (engine.score_normalized(p).value != 1.0) pass = false;
    for (int q = 0; q < 500; ++q) {
        FeatureVector query{uniform_in(rng, -0.3, 1.3), uniform_in(rng, -0.3, 1.3),
                            uniform_in(rng, -0.3, 1.3)};
        const double v = engine.score_normalized(query).value;
        if (!(v > 0.0 && v <= 1.0)) pass = false;
    }
    // a measurable offset from every point keeps the score below one
    for (int q = 0; q < 200; ++q) {
        FeatureVector query = pts[rng() % pts.size()];
        query[rng() % 3] += uniform_in(rng, 1e-6, 1e-3) * (rng() % 2 ? 1.0 : -1.0);
        if (engine.score_normalized(query).value >= 1.0) {
            pass = false;
            detail = "offset query scored 1";
        }
    }

    // metric axioms on 1000 randomized triples
    for (int t = 0; t < 1000; ++t) {
        const size_t dim = 1 + static_cast<size_t>(rng() % 4);
        CovarianceStructure cov;
        cov.decay_rates.resize(dim);
        for (auto& r : cov.decay_rates) r = uniform_in(rng, 1e-3, 4.0);
        FeatureVector a(dim), b(dim), c(dim);
        for (size_t i = 0; i < dim; ++i) {
            a[i] = uniform_in(rng, -2, 2);
            b[i] = uniform_in(rng, -2, 2);
            c[i] = uniform_in(rng, -2, 2);
        }
        const double ab = mahalanobis_distance(a, b, cov);
        const double ba = mahalanobis_distance(b, a, cov);
        const double ac = mahalanobis_distance(a, c, cov);
        const double cb = mahalanobis_distance(c, b, cov);
        if (std::abs(ab - ba) > 1e-12) pass = false;
        if (ab > ac + cb + 1e-12 * std::max(1.0, ab)) pass = false;
        if (ab < 0.0) pass = false;
    }
    report(6, "score range, exactness at data, metric axioms", pass, detail);
}

// --------------------------------------------------------------------------
// 7. distribution shift on the synthetic study (full pipeline)
// --------------------------------------------------------------------------
DiameterVector criterion_7(const Study& study) {
    const auto t0 = std::chrono::steady_clock::now();

    SearchSpec spec;
    spec.objective = Objective::Ineptitude;
    spec.grid.axes = {DiameterGrid::linspace(0.01, 0.2, 5),
                      DiameterGrid::linspace(0.01, 0.2, 5),
                      DiameterGrid::linspace(0.01, 0.2, 5)};
    const auto opt = optimize(study.kb, spec, study.train_eval, study.base_config,
                              study.criterion);

    ReliabilityConfig cfg = study.base_config;
    cfg.diameters = opt.best.diameters;

    auto run_split = [&](const std::vector<Episode>& split) {
        std::vector<StreamSample> samples;
        for (const auto& ep : split)
            for (const auto& s : ep.states)
                samples.push_back({{s.up_temp, s.core_flow}, s.fcl_temp});
        return supervise_stream(samples, study.predictor.port(), study.kb, cfg,
                                study.criterion);
    };
    const auto d1 = run_split(study.data.d1_test);
    const auto d2 = run_split(study.data.d2_test);

    const double degr_d1 = degradation(d1.summary.counts).value_or(-1.0);
    const double degr_d2 = degradation(d2.summary.counts).value_or(-1.0);
    const auto& c2 = d2.summary.counts;
    const double incorrect_total =
        static_cast<double>(c2.rejected_incorrect + c2.accepted_incorrect);
    const double rejected_incorrect_fraction =
        incorrect_total > 0.0 ? static_cast<double>(c2.rejected_incorrect) / incorrect_total
                              : -1.0;

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = degr_d2 > degr_d1 && degr_d1 >= 0.0 &&
                      rejected_incorrect_fraction > 0.5 && elapsed < 60.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "degradation d1=%.3f d2=%.3f, d2 incorrect rejected %.3f, %.1fs", degr_d1,
                  degr_d2, rejected_incorrect_fraction, elapsed);
    report(7, "shifted family degrades more yet stays filtered", pass, buf);
    return opt.best.diameters;
}

// --------------------------------------------------------------------------
// 8. optimizer exhaustiveness and byte-identical determinism
// --------------------------------------------------------------------------
void criterion_8(const Study& study) {
    SearchSpec spec;
    spec.objective = Objective::Peril;
    spec.grid.axes = {DiameterGrid::linspace(0.01, 0.2, 5),
                      DiameterGrid::linspace(0.01, 0.2, 5),
                      DiameterGrid::linspace(0.01, 0.2, 5)};
    const auto a = optimize(study.kb, spec, study.train_eval, study.base_config,
                            study.criterion, 4);
    const auto b = optimize(study.kb, spec, study.train_eval, study.base_config,
                            study.criterion, 1);

    bool exhaustive = a.trace.size() == 125;
    for (const auto& cand : a.trace)
        if (cand.peril && *a.best.peril > *cand.peril) exhaustive = false;

    const auto names = study.kb.schema().names();
    const bool deterministic = trace_to_csv(a.trace, names) == trace_to_csv(b.trace, names) &&
                               a.best_index == b.best_index;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "best peril %.4f over %zu candidates",
                  a.best.peril.value_or(-1.0), a.trace.size());
    report(8, "exhaustive grid minimum and run-to-run determinism",
           exhaustive && deterministic, buf);
}

// --------------------------------------------------------------------------
// 9. reliability dips where the prediction errs, within one transient
// --------------------------------------------------------------------------
void criterion_9(const Study& study, const DiameterVector& tuned) {
    ReliabilityConfig cfg = study.base_config;
    cfg.diameters = tuned;
    ReliabilityEngine engine(study.kb, cfg);

    bool found = false;
    bool pass = false;
    char buf[160] = "no transient with enough good and bad steps";
    for (const auto& ep : study.data.d1_test) {
        std::vector<double> good, bad;
        for (const auto& s : ep.states) {
            const double pred = study.predictor(std::vector<double>{s.up_temp, s.core_flow});
            const double score = engine.score_raw(FeatureVector{s.up_temp, s.core_flow},
                                                  pred).value;
            if (std::abs(pred - s.fcl_temp) > study.criterion.epsilon)
                bad.push_back(score);
            else
                good.push_back(score);
        }
        if (good.size() < 10 || bad.size() < 10) continue;
        found = true;
        const double med_good = median(good);
        const double med_bad = median(bad);
        pass = med_bad < med_good;
        std::snprintf(buf, sizeof(buf),
                      "episode %zu: median score %.4f on %zu poor steps vs %.4f on %zu good",
                      ep.index, med_bad, bad.size(), med_good, good.size());
        break;
    }
    report(9, "scores drop where the prediction goes wrong", found && pass, buf);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    const Study study = build_study();
    criterion_5(study);
    criterion_6();
    const DiameterVector tuned = criterion_7(study);
    criterion_8(study);
    criterion_9(study, tuned);

    if (failures == 0) {
        std::printf("acceptance: 9/9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}
