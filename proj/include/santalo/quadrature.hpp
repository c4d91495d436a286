#pragma once

// Adaptive Gauss–Legendre quadrature on finite intervals.

#include <array>
#include <cmath>
#include <numbers>

namespace santalo::quad {

inline constexpr int kOrder = 20;

struct Rule {
    std::array<double, kOrder> nodes{};
    std::array<double, kOrder> weights{};
};

/// Nodes and weights on [-1, 1], computed once by Newton iteration on P_20.
inline const Rule& gauss_legendre() {
    static const Rule rule = [] {
        Rule r;
        for (int i = 0; i < kOrder; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= kOrder; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            r.nodes[i] = x;
            r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

template <class F>
double fixed(const F& f, double a, double b) {
    const auto& rule = gauss_legendre();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < kOrder; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

namespace detail {
template <class F>
double refine(const F& f, double a, double b, double whole, double rel_tol, double abs_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = fixed(f, a, m);
    const double right = fixed(f, m, b);
    const double both = left + right;
    const double err = std::abs(both - whole);
    if (depth >= 40 || err <= rel_tol * std::abs(both) || err <= abs_tol) return both;
    return refine(f, a, m, left, rel_tol, 0.5 * abs_tol, depth + 1) +
           refine(f, m, b, right, rel_tol, 0.5 * abs_tol, depth + 1);
}
}  // namespace detail

/// ∫_a^b f by bisection until the two-level estimates agree to rel_tol, or
/// to abs_tol (split evenly between halves) when the integral is negligible.
template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-13, double abs_tol = 0.0) {
    if (!(b > a)) return 0.0;
    return detail::refine(f, a, b, fixed(f, a, b), rel_tol, abs_tol, 0);
}

}  // namespace santalo::quad
