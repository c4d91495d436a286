#pragma once

// Randomized property suites and brute-force oracles.

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "santalo/profile.hpp"

namespace santalo::verify {

struct UnknownSuite : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Random piecewise-linear profiles. Case i of a run draws from its own
/// generator seeded by case_seed(i), so any single failure can be replayed.
struct ProfileSampler {
    std::uint64_t seed = 0;
    int max_segments = 6;
    double slope_scale = 1.0;
    double radius_scale = 1.0;

    [[nodiscard]] std::uint64_t case_seed(std::uint64_t index) const;
    [[nodiscard]] ConvexProfile draw(std::mt19937_64& rng) const;
    [[nodiscard]] ConvexProfile sample(std::uint64_t case_seed) const;
};

/// Pointwise sum p + q (again a member of the class).
ConvexProfile add(const ConvexProfile& p, const ConvexProfile& q);

struct Failure {
    std::uint64_t case_index = 0;
    std::uint64_t case_seed = 0;
    std::string description;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    int cases = 0;
    std::vector<Failure> failures;
    std::map<std::string, double> worst;  ///< per-property worst residual or margin

    [[nodiscard]] bool passed() const { return failures.empty(); }
};

std::string to_json(const SuiteReport& report);
std::string to_json(const std::vector<SuiteReport>& reports);

const std::vector<std::string>& suite_names();
std::uint64_t default_seed(std::string_view suite);
int default_cases(std::string_view suite);

SuiteReport run_suite(std::string_view name, const ProfileSampler& sampler, int cases);

struct BruteForceResult {
    double log_lambda = 0.0;
    double a = 0.0;
    double b = 0.0;  ///< +∞ when the best tent is an indicator-capped one
    double log_best_finite_b = 0.0;  ///< best value over the finite-b columns
};

/// Grid maximum of quadrature-evaluated s^𝒥ₙ over tents T_{a,b,1}:
/// a on a log grid over [0.01, 5], b ∈ {0} ∪ log grid up to 1e4 ∪ {∞}.
BruteForceResult brute_force_lambda(int n, int grid_a, int grid_b);

}  // namespace santalo::verify
