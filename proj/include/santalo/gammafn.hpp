#pragma once

// Log-domain complete and incomplete gamma functions.
//
// All magnitudes are carried as logarithms; only the regularized values
// P(s,x) = γ(s,x)/Γ(s) and Q(s,x) = Γ(s,x)/Γ(s) are ever exponentiated.

#include <stdexcept>

namespace santalo::gammafn {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct RegularizedGamma {
    double p = 0.0;            ///< lower regularized, γ(s,x)/Γ(s)
    double q = 1.0;            ///< upper regularized, Γ(s,x)/Γ(s)
    double log_p = 0.0;        ///< log p, finite even when p underflows
    double log_q = 0.0;        ///< log q
    double log_gamma_s = 0.0;  ///< log Γ(s)
};

/// Regularized incomplete gamma pair for s >= 1, x >= 0.
///
/// Uses the lower series for x < s + 1 and the upper continued fraction
/// otherwise; the complementary value is derived with log1p so that both
/// p and q keep full absolute accuracy.
RegularizedGamma reg_gamma(double s, double x);

/// log γ(s, x) (lower incomplete gamma, not regularized).
double log_lower_gamma(double s, double x);
/// log Γ(s, x) (upper incomplete gamma, not regularized).
double log_upper_gamma(double s, double x);

double log_factorial(int n);
double log_binomial(int n, int k);

/// log(x^s e^{-x} / Γ(s)), accurate for large s near the transition x ≈ s.
double log_power_prefix(double s, double x);

/// e^{-a} a^{n+1}/(n+1) <= γ(n+1, a) <= a^{n+1}/(n+1), for a in (0, 1].
bool check_small_a_bound(int n, double a);

/// P(n+1, n+1+t) >= 1 - exp(-t²/(8(n+1))), for t in (0, 2(n+1)).
bool check_tail_bound(int n, double t);

/// Q(m+1, m) >= 1/2, i.e. Γ(m+1, m) >= m!/2.
bool check_gamma_half(int m);

namespace detail {
/// lgamma(s) - ((s - 1/2) log s - s + log(2π)/2).
double stirling_error(double s);
/// t - log1p(t) without cancellation near 0.
double t_minus_log1p(double t);
/// log Σ_{k>=0} x^k / ((s+1)...(s+k)), so that γ(s,x) = x^s e^{-x} / s · exp(.).
double log_lower_series(double s, double x);
}  // namespace detail

}  // namespace santalo::gammafn
