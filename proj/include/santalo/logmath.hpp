#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace santalo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// log(e^a + e^b), exact for infinite arguments.
inline double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -kInf) return a;
    if (a == kInf) return kInf;
    return a + std::log1p(std::exp(b - a));
}

/// log(1 - e^x) for x <= 0, switching between the two stable forms at -log 2.
inline double log1mexp(double x) {
    if (x > -0.6931471805599453) return std::log(-std::expm1(x));
    return std::log1p(-std::exp(x));
}

/// log(e^a - e^b); requires a >= b. Returns -inf when a == b.
inline double log_sub(double a, double b) {
    if (b == -kInf) return a;
    if (a == b) return -kInf;
    return a + log1mexp(b - a);
}

/// Pairwise log-sum-exp over a set of log-magnitudes.
double log_sum(std::span<const double> terms);

/// A real number carried as sign and log-magnitude; sign 0 means exactly zero.
struct SignedLog {
    int sign = 0;
    double log_abs = -kInf;

    [[nodiscard]] double value() const {
        return sign == 0 ? 0.0 : sign * std::exp(log_abs);
    }

    /// e^a - e^b.
    static SignedLog difference(double a, double b) {
        if (a == b) return {};
        if (a > b) return {+1, log_sub(a, b)};
        return {-1, log_sub(b, a)};
    }

    friend SignedLog operator+(const SignedLog& x, const SignedLog& y);
};

}  // namespace santalo
