#pragma once

// The extremal problem for s^𝒥ₙ: sign changes of the density difference
// m_λ(z) = e^{-1/z} z^{-(n+2)} - λ e^{-z}, the two-slope tent family, the
// tent-improvement map, and the solver for λₙ = max s^𝒥ₙ.

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "santalo/logmath.hpp"
#include "santalo/profile.hpp"

namespace santalo::extremal {

struct OneRootCase : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroProfile : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BracketFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StationarityFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BracketInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// T_{a,b,x₀}: slope a on [0, x₀], slope a + b beyond; b = ∞ gives ψ_{B,a·x₀}
/// rescaled, i.e. a·x on [0, x₀] and +∞ past x₀.
struct TentParams {
    double a = 0.0;
    double b = 0.0;
    double x0 = 1.0;
};

struct RootTriple {
    double z1 = 0.0;
    double z2 = 0.0;
    double z3 = 0.0;
    double log_lambda = 0.0;
    int n = 1;
};

struct LambdaEstimate {
    int n = 1;
    double log_lambda = 0.0;
    double a_n = 0.0;
    std::pair<double, double> bracket;  ///< [z₁, z₂] of m_{n!}
    double residual_n1 = 0.0;           ///< e^{-1/a}/(γ(n+1,a) λ) - 1
    double residual_n2 = 0.0;           ///< e^a γ(n+1,1/a)/λ - 1
    double lambda_hat_minus_1 = 0.0;    ///< λₙ/n! - 1
    RootTriple roots;                   ///< sign changes of m_{λₙ}
    bool single_peak = true;            ///< coarse scan saw one local maximum of G
};

/// Sign of m_λ(z), decided in log domain.
int m_sign(double z, int n, double log_lambda);

/// log |m_λ(z)| (-∞ at a root).
double log_abs_m(double z, int n, double log_lambda);

/// The three sign changes of m_λ. Throws OneRootCase when m_λ changes sign
/// only once (including tangential touches).
RootTriple roots_of_m(int n, double log_lambda);

/// m_λ has signs (-, +, -, +) on the four intervals cut by the triple.
bool has_sign_pattern(const RootTriple& roots);

ConvexProfile tent_profile(const TentParams& t);

/// Replaces ψ by max{L₁, L₂} built from its radii at z₁, z₂, z₃.
TentParams t_map(const RadiusFunction& rho, const RootTriple& roots);

/// log F(a, b) = log s^𝒥ₙ(T_{a,b,1}) in closed form (b = ∞ defers to big_g).
double big_f(double a, double b, int n);

/// log G(a) = log s^𝒥ₙ(T_{a,∞,1}).
double big_g(double a, int n);

LambdaEstimate solve_lambda(int n);

/// (1/(n+n^α), 1/(n-n^α)) once m_{n!} is verified negative at both ends and
/// positive at 1/n; throws BracketInvalid otherwise.
std::pair<double, double> a_bracket(int n, double alpha);

/// c_k = C(n-1,k)(γ(k+1, 1/a) - λ Γ(n-k+1, a)), k = 0..n-1.
std::vector<SignedLog> ck_coefficients(int n, double a, double log_lambda);

/// Σ c_k b^k.
SignedLog evaluate_polynomial(std::span<const SignedLog> coefficients, double b);

}  // namespace santalo::extremal
