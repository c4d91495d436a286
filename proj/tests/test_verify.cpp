#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "santalo/extremal.hpp"
#include "santalo/profile_io.hpp"
#include "santalo/verify.hpp"

using namespace santalo;
using namespace santalo::verify;

TEST_CASE("sampler draws valid, replayable profiles") {
    ProfileSampler s;
    s.seed = 5;
    for (std::uint64_t i = 0; i < 500; ++i) {
        const auto seed = s.case_seed(i);
        const auto p = s.sample(seed);
        CHECK(p.knots().front().r == 0.0);
        CHECK(p.knots().front().v == 0.0);
        CHECK(p.knots().size() <= static_cast<std::size_t>(s.max_segments + 1));
        CHECK(io::format_profile(s.sample(seed)) == io::format_profile(p));
    }
    ProfileSampler other = s;
    other.seed = 6;
    CHECK(other.case_seed(0) != s.case_seed(0));
}

TEST_CASE("sampler covers both tail kinds") {
    ProfileSampler s;
    s.seed = 8;
    int indicator = 0;
    for (std::uint64_t i = 0; i < 400; ++i) indicator += s.sample(s.case_seed(i)).has_indicator_tail() ? 1 : 0;
    CHECK(indicator > 40);
    CHECK(indicator < 200);
}

TEST_CASE("pointwise sums dominate both terms") {
    ProfileSampler s;
    s.seed = 9;
    for (std::uint64_t i = 0; i < 200; ++i) {
        std::mt19937_64 rng(s.case_seed(i));
        const auto p = s.draw(rng);
        const auto q = s.draw(rng);
        const auto sum = add(p, q);
        for (double x : {0.0, 0.1, 0.9, 2.5, 8.0}) {
            const double expected = p(x) + q(x);
            if (expected == kInf) {
                CHECK(sum(x) == kInf);
            } else {
                CHECK(sum(x) == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("every suite passes on a short run") {
    for (const auto& name : suite_names()) {
        ProfileSampler s;
        s.seed = default_seed(name) + 1000;
        const auto report = run_suite(name, s, 40);
        CHECK_MESSAGE(report.passed(), name, ": ", to_json(report));
        CHECK(report.suite == name);
    }
}

TEST_CASE("suite registry") {
    CHECK(suite_names().size() == 14);
    CHECK(default_seed("delta-nonpositive") == 7);
    CHECK(default_cases("involution") == 1000);
    ProfileSampler s;
    CHECK_THROWS_AS(run_suite("no-such-suite", s, 1), UnknownSuite);
    CHECK_THROWS_AS(default_seed("no-such-suite"), UnknownSuite);
}

TEST_CASE("report JSON") {
    ProfileSampler s;
    s.seed = 31;
    const auto report = run_suite("t-improvement", s, 20);
    const auto j = nlohmann::json::parse(to_json(report));
    CHECK(j["suite"] == "t-improvement");
    CHECK(j["seed"] == 31);
    CHECK(j["cases"] == 20);
    CHECK(j["passed"] == true);
    CHECK(j["worst"].contains("min_margin"));
    const auto both = nlohmann::json::parse(to_json(std::vector<SuiteReport>{report, report}));
    CHECK(both.is_object());
    CHECK(both["suites"].size() == 2);
    CHECK(both["passed"] == true);
}

TEST_CASE("a coarse brute-force grid stays below the solver and near it") {
    const auto est = extremal::solve_lambda(1);
    const auto bf = brute_force_lambda(1, 200, 20);
    CHECK(bf.log_lambda <= est.log_lambda + 1e-9);
    CHECK(bf.log_lambda >= est.log_lambda - 1e-2);
    CHECK(bf.b == kInf);
    CHECK(bf.log_best_finite_b < bf.log_lambda);
}
