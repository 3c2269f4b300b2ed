#include <doctest.h>

#include <cmath>
#include <random>

#include "laddr/errors.hpp"
#include "laddr/metrics.hpp"

using namespace laddr;

namespace {

ConfusionCounts counts(uint64_t a_o, uint64_t a_x, uint64_t r_o, uint64_t r_x) {
    ConfusionCounts c;
    c.accepted_correct = a_o;
    c.accepted_incorrect = a_x;
    c.rejected_correct = r_o;
    c.rejected_incorrect = r_x;
    return c;
}

} // namespace

TEST_CASE("ratios on a large in-family tally") {
    const auto c = counts(13825, 635, 931, 4084);
    CHECK(*peril(c) == doctest::Approx(0.04391424619640387).epsilon(1e-14));
    CHECK(*degradation(c) == doctest::Approx(0.06309297912713473).epsilon(1e-14));
    CHECK(*ineptitude(c) == doctest::Approx(0.08041078305519897).epsilon(1e-14));
}

TEST_CASE("ratios on a large shifted-family tally") {
    const auto c = counts(6865, 400, 3783, 3487);
    CHECK(*peril(c) == doctest::Approx(0.05505849965588438).epsilon(1e-14));
    CHECK(*degradation(c) == doctest::Approx(0.3552779864763336).epsilon(1e-14));
    CHECK(*ineptitude(c) == doctest::Approx(0.28778809769521846).epsilon(1e-14));
}

TEST_CASE("degenerate tallies give clean extremes") {
    CHECK(*degradation(counts(10, 3, 0, 5)) == 0.0); // nothing correct was rejected
    CHECK(*peril(counts(10, 0, 2, 5)) == 0.0);       // every accepted one was correct
    CHECK(*ineptitude(counts(10, 0, 0, 5)) == 0.0);  // perfectly proficient filter
    CHECK(*degradation(counts(0, 3, 7, 5)) == 1.0);  // every correct one was rejected
}

TEST_CASE("zero denominators surface as undefined, not zero") {
    CHECK_FALSE(degradation(counts(0, 3, 0, 5)).has_value());
    CHECK_FALSE(peril(counts(0, 0, 2, 5)).has_value());
    CHECK_FALSE(ineptitude(counts(0, 0, 0, 0)).has_value());
}

TEST_CASE("classification honors the boundary conventions") {
    AcceptanceCriterion eps{1.0};
    // thresholds compare with >=: exactly at the boundary is accepted
    CHECK(classify(0.0, 0.0, 1.0, 0.5, eps) == Outcome::AcceptedCorrect);
    CHECK(classify(0.0, 0.0, 0.49, 0.5, eps) == Outcome::RejectedCorrect);
    CHECK(classify(10.0, 0.0, 0.5, 0.5, eps) == Outcome::AcceptedIncorrect);
    // correctness band is inclusive too
    CHECK(classify(1.0, 0.0, 1.0, 0.5, eps) == Outcome::AcceptedCorrect);
    CHECK(classify(1.0000001, 0.0, 1.0, 0.5, eps) == Outcome::AcceptedIncorrect);
}

TEST_CASE("classification rejects non-finite inputs") {
    AcceptanceCriterion eps{1.0};
    CHECK_THROWS_AS(classify(std::nan(""), 0.0, 1.0, 0.5, eps), ValidationError);
    CHECK_THROWS_AS(classify(0.0, std::nan(""), 1.0, 0.5, eps), ValidationError);
    AcceptanceCriterion bad{0.0};
    CHECK_THROWS_AS(classify(0.0, 0.0, 1.0, 0.5, bad), ValidationError);
}

TEST_CASE("metrics stay inside [0,1] and satisfy the mix identity") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 500; ++trial) {
        const auto c = counts(rng() % 50, rng() % 50, rng() % 50, rng() % 50);
        const auto d = degradation(c);
        const auto p = peril(c);
        const auto f = ineptitude(c);
        for (const auto& m : {d, p, f})
            if (m) {
                CHECK(*m >= 0.0);
                CHECK(*m <= 1.0);
            }
        // the blended numerator decomposes into the two single-concern ones
        if (d && p) {
            const double lhs = static_cast<double>(c.rejected_correct + c.accepted_incorrect);
            const double rhs =
                *d * static_cast<double>(c.rejected_correct + c.accepted_correct) +
                *p * static_cast<double>(c.accepted_incorrect + c.accepted_correct);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}

TEST_CASE("tallying is associative across shards") {
    auto a = counts(3, 1, 4, 1);
    const auto b = counts(5, 9, 2, 6);
    auto whole = counts(8, 10, 6, 7);
    a += b;
    CHECK(a.accepted_correct == whole.accepted_correct);
    CHECK(a.total() == whole.total());
}

TEST_CASE("report carries counts, metrics, and settings") {
    const auto c = counts(13825, 635, 931, 4084);
    const auto report = metrics_report(c, 0.5, 10.0);
    CHECK(report["counts"]["A_o"] == 13825);
    CHECK(report["counts"]["A_x"] == 635);
    CHECK(report["counts"]["R_o"] == 931);
    CHECK(report["counts"]["R_x"] == 4084);
    CHECK(report["threshold"] == 0.5);
    CHECK(report["epsilon"] == 10.0);
    CHECK(report["peril"].get<double>() == doctest::Approx(0.0439142).epsilon(1e-5));
    // undefined metrics serialize as null
    const auto empty = metrics_report(counts(0, 0, 0, 0));
    CHECK(empty["peril"].is_null());
    CHECK(empty["threshold"].is_null());
}
