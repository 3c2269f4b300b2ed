#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "laddr/covariance.hpp"
#include "laddr/errors.hpp"
#include "laddr/knowledge_base.hpp"
#include "laddr/random.hpp"
#include "laddr/scaler.hpp"

using namespace laddr;

namespace {

Schema one_feature() { return Schema({{"x", FeatureRole::Input}}); }

Schema study_schema() {
    return Schema({{"up_temp", FeatureRole::Input},
                   {"core_flow", FeatureRole::Input},
                   {"t_fcl", FeatureRole::Target}});
}

} // namespace

TEST_CASE("raw endpoints map to 0 and 1") {
    auto kb = KnowledgeBase::from_raw(one_feature(), {{0.0}, {10.0}});
    CHECK(kb.size() == 2);
    CHECK(kb.scaler().mins()[0] == 0.0);
    CHECK(kb.scaler().maxs()[0] == 10.0);
    CHECK(kb.points()[0][0] == 0.0);
    CHECK(kb.points()[1][0] == 1.0);
}

TEST_CASE("constant column is rejected") {
    CHECK_THROWS_AS(KnowledgeBase::from_raw(one_feature(), {{5.0}}), ValidationError);
    CHECK_THROWS_AS(KnowledgeBase::from_raw(one_feature(), {{5.0}, {5.0}}), ValidationError);
}

TEST_CASE("empty and malformed inputs are rejected with context") {
    CHECK_THROWS_AS(KnowledgeBase::from_raw(one_feature(), {}), ValidationError);
    CHECK_THROWS_WITH_AS(
        KnowledgeBase::from_raw(one_feature(), {{1.0}, {std::nan("")}, {2.0}}),
        doctest::Contains("row 1"), ValidationError);
    // width mismatch
    CHECK_THROWS_AS(KnowledgeBase::from_raw(study_schema(), {{1.0, 2.0}}), ValidationError);
}

TEST_CASE("three-feature build keeps row order and lands in the unit cube") {
    std::vector<std::vector<double>> rows = {
        {550.0, 1.00, 620.0}, {560.0, 0.90, 640.0}, {575.0, 0.80, 660.0},
        {590.0, 0.70, 690.0}, {605.0, 0.62, 720.0}};
    auto kb = KnowledgeBase::from_raw(study_schema(), rows);
    CHECK(kb.dimension() == 3);
    CHECK(kb.size() == rows.size());
    for (const auto& p : kb.points())
        for (double v : p) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    // order preserved: first row is the (min, max, min) corner here
    CHECK(kb.points()[0][0] == 0.0);
    CHECK(kb.points()[0][1] == 1.0);
    CHECK(kb.points()[0][2] == 0.0);
    // duplicates are retained
    rows.push_back(rows.back());
    CHECK(KnowledgeBase::from_raw(study_schema(), rows).size() == rows.size());
}

TEST_CASE("normalize and denormalize invert each other") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const double lo = uniform_in(rng, -1e3, 1e3);
        const double hi = lo + uniform_in(rng, 1e-3, 1e3);
        MinMaxScaler scaler({lo}, {hi});
        const double raw = uniform_in(rng, lo - 10.0, hi + 10.0);
        const double rt = scaler.denormalize(0, scaler.normalize(0, raw));
        CHECK(std::abs(rt - raw) <= 1e-12 * std::max(1.0, std::abs(raw)));
        const double val = uniform_in(rng, -2.0, 2.0);
        const double rt2 = scaler.normalize(0, scaler.denormalize(0, val));
        CHECK(std::abs(rt2 - val) <= 1e-12 * std::max(1.0, std::abs(val)));
    }
}

TEST_CASE("projection keeps only input features") {
    auto kb = KnowledgeBase::from_raw(
        study_schema(), {{550.0, 1.00, 620.0}, {560.0, 0.90, 640.0}, {575.0, 0.80, 660.0}});
    auto inputs = kb.project_inputs();
    CHECK(inputs.dimension() == 2);
    CHECK(inputs.schema().names() == std::vector<std::string>{"up_temp", "core_flow"});
    CHECK_FALSE(inputs.schema().target_index().has_value());
    for (size_t r = 0; r < kb.size(); ++r) {
        CHECK(inputs.points()[r][0] == kb.points()[r][0]);
        CHECK(inputs.points()[r][1] == kb.points()[r][1]);
    }
}

TEST_CASE("knowledge base round-trips through files exactly") {
    auto kb = KnowledgeBase::from_raw(
        study_schema(),
        {{550.123456789012, 1.0, 620.0}, {560.0, 0.9000000000000321, 640.0},
         {575.0, 0.8, 660.987654321098}},
        {"unit-test", "2024-05-01T00:00:00Z"});
    const auto base = std::filesystem::temp_directory_path() / "laddr_test_kb";
    kb.save(base);
    auto loaded = KnowledgeBase::load(base.string() + ".kb.json");
    CHECK(loaded.schema() == kb.schema());
    CHECK(loaded.scaler() == kb.scaler());
    REQUIRE(loaded.size() == kb.size());
    for (size_t r = 0; r < kb.size(); ++r)
        for (size_t c = 0; c < kb.dimension(); ++c)
            CHECK(loaded.points()[r][c] == kb.points()[r][c]);
    CHECK(loaded.metadata().source == "unit-test");
}

TEST_CASE("diameter solve hits the decay threshold at the radius") {
    // diameter 0.36 at threshold 0.2: rate (0.36/ln 5)^2
    auto cov = solve_covariance(DiameterVector{{0.36}}, 0.2);
    CHECK(cov.decay_rates[0] == doctest::Approx(0.050033000277183944).epsilon(1e-14));
    const double rel = std::exp(-2.0 * 0.18 / std::sqrt(cov.decay_rates[0]));
    CHECK(rel == doctest::Approx(0.2).epsilon(1e-12));

    // diameter ln 5 inverts to a unit rate
    auto unit = solve_covariance(DiameterVector{{std::log(5.0)}}, 0.2);
    CHECK(unit.decay_rates[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("diameter solve on a three-axis configuration") {
    auto cov = solve_covariance(DiameterVector{{0.0254, 0.0254, 0.064}}, 0.2);
    CHECK(cov.decay_rates[0] == doctest::Approx(2.490685992193518e-4).epsilon(1e-13));
    CHECK(cov.decay_rates[1] == doctest::Approx(2.490685992193518e-4).epsilon(1e-13));
    CHECK(cov.decay_rates[2] == doctest::Approx(1.5812898853035915e-3).epsilon(1e-13));
    // reliability at each per-axis radius is the decay threshold
    for (size_t axis = 0; axis < 3; ++axis) {
        const double radius = axis == 2 ? 0.032 : 0.0127;
        CHECK(std::exp(-2.0 * radius / std::sqrt(cov.decay_rates[axis])) ==
              doctest::Approx(0.2).epsilon(1e-12));
    }
}

TEST_CASE("diameter solve rejects bad arguments") {
    CHECK_THROWS_AS(solve_covariance(DiameterVector{{0.0}}, 0.2), ValidationError);
    CHECK_THROWS_AS(solve_covariance(DiameterVector{{-1.0}}, 0.2), ValidationError);
    CHECK_THROWS_AS(solve_covariance(DiameterVector{{1.0}}, 0.0), ValidationError);
    CHECK_THROWS_AS(solve_covariance(DiameterVector{{1.0}}, 1.0), ValidationError);
}

TEST_CASE("diameter solve is strictly monotone per axis") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const double g = uniform_in(rng, 1e-3, 3.0);
        const double bigger = g * uniform_in(rng, 1.0001, 4.0);
        const double thr = uniform_in(rng, 0.01, 0.99);
        auto a = solve_covariance(DiameterVector{{g}}, thr);
        auto b = solve_covariance(DiameterVector{{bigger}}, thr);
        CHECK(b.decay_rates[0] > a.decay_rates[0]);
    }
}

TEST_CASE("schema rejects duplicates and multiple targets") {
    CHECK_THROWS_AS(Schema({{"x", FeatureRole::Input}, {"x", FeatureRole::Input}}),
                    ValidationError);
    CHECK_THROWS_AS(Schema({{"x", FeatureRole::Target}, {"y", FeatureRole::Target}}),
                    ValidationError);
    CHECK_THROWS_AS(Schema({{"x", FeatureRole::Target}}), ValidationError); // no inputs
}
