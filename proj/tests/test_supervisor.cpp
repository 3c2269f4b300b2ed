#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "laddr/errors.hpp"
#include "laddr/random.hpp"
#include "laddr/supervisor.hpp"

using namespace laddr;

namespace {

KnowledgeBase diagonal_kb() {
    return KnowledgeBase::from_normalized(
        Schema({{"x", FeatureRole::Input}, {"t", FeatureRole::Target}}),
        MinMaxScaler({0.0, 0.0}, {1.0, 1.0}),
        {{0.2, 0.2}, {0.5, 0.5}, {0.8, 0.8}});
}

ReliabilityConfig config() {
    ReliabilityConfig cfg;
    cfg.diameters = DiameterVector{{0.2, 0.2}};
    cfg.mode = EvidenceMode::InputsPlusTarget;
    return cfg;
}

const AcceptanceCriterion kEps{0.05};

PredictorPort identity_predictor() {
    return [](std::span<const double> inputs) { return inputs[0]; };
}

} // namespace

TEST_CASE("replaying the knowledge base with a perfect predictor is all-accept") {
    const auto kb = diagonal_kb();
    std::vector<StreamSample> samples;
    for (const auto& p : kb.points()) samples.push_back({{p[0]}, p[1]});
    const auto result = supervise_stream(samples, identity_predictor(), kb, config(), kEps);
    REQUIRE(result.decisions.size() == samples.size());
    for (const auto& d : result.decisions) {
        CHECK(*d.score == 1.0);
        CHECK(d.accept);
        CHECK_FALSE(d.engaged_auxiliary);
        CHECK(*d.correct);
    }
    const auto& s = result.summary;
    CHECK(*s.peril == 0.0);
    CHECK(*s.degradation == 0.0);
    CHECK(*s.ineptitude == 0.0);
}

TEST_CASE("decisions preserve stream order and ids") {
    const auto kb = diagonal_kb();
    std::vector<StreamSample> samples;
    std::mt19937_64 rng(91);
    for (int i = 0; i < 64; ++i) samples.push_back({{uniform01(rng)}, std::nullopt});
    const auto result = supervise_stream(samples, identity_predictor(), kb, config(), kEps);
    for (size_t i = 0; i < result.decisions.size(); ++i) {
        CHECK(result.decisions[i].id == i);
        CHECK(result.decisions[i].timestamp == static_cast<double>(i));
    }
    CHECK_FALSE(result.summary.has_truth);
    CHECK_FALSE(result.summary.peril.has_value());
}

TEST_CASE("rejection flags the auxiliary path but keeps the prediction") {
    const auto kb = diagonal_kb();
    // prediction far off the diagonal: low score in inputs+target mode
    const std::vector<StreamSample> samples{{{0.5}, 0.5}};
    PredictorPort bad = [](std::span<const double>) { return 0.99; };
    const auto result = supervise_stream(samples, bad, kb, config(), kEps);
    const auto& d = result.decisions[0];
    CHECK_FALSE(d.accept);
    CHECK(d.engaged_auxiliary);
    CHECK(*d.prediction == 0.99);
    CHECK_FALSE(*d.correct);
    CHECK(result.summary.counts.rejected_incorrect == 1);
}

TEST_CASE("a throwing predictor yields a rejected, flagged decision") {
    const auto kb = diagonal_kb();
    size_t calls = 0;
    PredictorPort flaky = [&calls](std::span<const double> inputs) {
        if (++calls == 2) throw std::runtime_error("sensor offline");
        return inputs[0];
    };
    const std::vector<StreamSample> samples{{{0.2}, 0.2}, {{0.5}, 0.5}, {{0.8}, 0.8}};
    const auto result = supervise_stream(samples, flaky, kb, config(), kEps);
    CHECK(result.decisions[0].accept);
    const auto& failed = result.decisions[1];
    CHECK(failed.predictor_error);
    CHECK_FALSE(failed.accept);
    CHECK(failed.engaged_auxiliary);
    CHECK_FALSE(failed.prediction.has_value());
    CHECK_FALSE(failed.score.has_value()); // target evidence needs the prediction
    CHECK(result.decisions[2].accept);
    CHECK(result.summary.predictor_failures == 1);
    // failed rows cannot be judged, so they stay out of the tallies
    CHECK(result.summary.counts.total() == 2);
}

TEST_CASE("inputs-only mode still scores when the predictor fails") {
    const auto kb = diagonal_kb();
    auto cfg = config();
    cfg.mode = EvidenceMode::InputsOnly;
    PredictorPort broken = [](std::span<const double>) -> double {
        throw std::runtime_error("no model");
    };
    const auto result = supervise_stream({{{0.5}, 0.5}}, broken, kb, cfg, kEps);
    const auto& d = result.decisions[0];
    CHECK(d.predictor_error);
    CHECK(d.score.has_value());
    CHECK(*d.score == 1.0);
    CHECK_FALSE(d.accept); // failure forces rejection regardless of the score
}

TEST_CASE("non-finite predictor output counts as a failure") {
    const auto kb = diagonal_kb();
    PredictorPort nan_model = [](std::span<const double>) { return std::nan(""); };
    const auto result = supervise_stream({{{0.5}, 0.5}}, nan_model, kb, config(), kEps);
    CHECK(result.decisions[0].predictor_error);
    CHECK(result.summary.predictor_failures == 1);
}

TEST_CASE("gate semantics match the classifier on random streams") {
    const auto kb = diagonal_kb();
    const auto cfg = config();
    std::mt19937_64 rng(97);
    std::vector<StreamSample> samples;
    for (int i = 0; i < 200; ++i)
        samples.push_back({{uniform_in(rng, -0.2, 1.2)}, uniform_in(rng, 0.0, 1.0)});
    PredictorPort jittery = [](std::span<const double> inputs) {
        // deterministic pseudo-noise derived from the input itself
        return inputs[0] + 0.2 * std::sin(1000.0 * inputs[0]);
    };
    const auto result = supervise_stream(samples, jittery, kb, cfg, kEps);
    ConfusionCounts expect;
    for (size_t i = 0; i < samples.size(); ++i) {
        const auto& d = result.decisions[i];
        REQUIRE(d.score.has_value());
        expect.add(classify(*d.prediction, *samples[i].truth, *d.score, cfg, kEps));
        CHECK(d.accept == (*d.score >= cfg.accept_threshold));
    }
    CHECK(expect.accepted_correct == result.summary.counts.accepted_correct);
    CHECK(expect.accepted_incorrect == result.summary.counts.accepted_incorrect);
    CHECK(expect.rejected_correct == result.summary.counts.rejected_correct);
    CHECK(expect.rejected_incorrect == result.summary.counts.rejected_incorrect);
}

TEST_CASE("identical streams replay to byte-identical logs") {
    const auto kb = diagonal_kb();
    std::mt19937_64 rng(101);
    std::vector<StreamSample> samples;
    std::vector<std::optional<double>> truths;
    for (int i = 0; i < 100; ++i) {
        samples.push_back({{uniform_in(rng, -0.2, 1.2)}, uniform01(rng)});
        truths.push_back(samples.back().truth);
    }
    const auto a = supervise_stream(samples, identity_predictor(), kb, config(), kEps);
    const auto b = supervise_stream(samples, identity_predictor(), kb, config(), kEps);
    CHECK(decisions_to_csv(a.decisions, truths, true) ==
          decisions_to_csv(b.decisions, truths, true));
    CHECK(summary_to_json(a.summary, config(), kEps) ==
          summary_to_json(b.summary, config(), kEps));
}

TEST_CASE("malformed rows are recorded and the stream continues") {
    StreamSupervisor supervisor(diagonal_kb(), config(), kEps);
    supervisor.note_malformed(3, "bad field");
    auto d = supervisor.process(4, FeatureVector{0.5}, 0.5, identity_predictor());
    CHECK(d.accept);
    const auto summary = supervisor.summary();
    CHECK(summary.malformed_rows == 1);
    CHECK(supervisor.issues()[0].row == 3);
    CHECK(summary.samples == 1);
}

TEST_CASE("decision log columns match the truth availability") {
    std::vector<Decision> ds(1);
    ds[0].id = 0;
    ds[0].score = 0.75;
    ds[0].accept = true;
    ds[0].prediction = 1.5;
    const auto no_truth = decisions_to_csv(ds, {}, false);
    CHECK(no_truth.find("id,score,accept,prediction\n") == 0);
    ds[0].correct = true;
    const auto with_truth = decisions_to_csv(ds, {1.45}, true);
    CHECK(with_truth.find("id,score,accept,prediction,truth,correct\n") == 0);
    CHECK(with_truth.find("0,0.75,1,1.5,1.45,1\n") != std::string::npos);
}
