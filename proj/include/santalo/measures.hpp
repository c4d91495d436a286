#pragma once

// Volumes of epigraphs under the reduced measures
//
//   μ₂: density n κₙ r^{n-1} e^{-z}
//   ν₂: density n κₙ r^{n-1} e^{-1/z} z^{-(n+2)}
//
// reported divided by κₙ, so that μ₂(epi ψ) = ∫ ρ(z)ⁿ e^{-z} dz and
// ν₂(epi ψ) = ∫ ρ(z)ⁿ e^{-1/z} z^{-(n+2)} dz. Everything is in log domain.

#include <stdexcept>

#include "santalo/logmath.hpp"
#include "santalo/profile.hpp"

namespace santalo::measures {

struct NonFinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VolumePair {
    double log_vol_mu = 0.0;
    double log_vol_nu = 0.0;
    int n = 1;
};

/// log κₙ, the volume of the Euclidean unit ball in ℝⁿ.
double log_kappa(int n);

/// log ∫₀^∞ ρ(z)ⁿ e^{-z} dz.
double vol_mu(const RadiusFunction& rho, int n);

/// log ∫₀^∞ ρ(z)ⁿ e^{-1/z} z^{-(n+2)} dz, computed as vol_mu(𝒥ρ).
double vol_nu(const RadiusFunction& rho, int n);

/// The same integral by quadrature in z directly, for cross-checking.
double vol_nu_direct(const RadiusFunction& rho, int n);

VolumePair volumes(const RadiusFunction& rho, int n);

/// log s^𝒥ₙ = log ν₂ - log μ₂, with 0/0 = ∞/∞ = 1.
double log_s_j_n(const RadiusFunction& rho, int n);
double s_j_n(const RadiusFunction& rho, int n);

/// Δ(epi ψ) = ν₂ - λ μ₂ as (sign, log|Δ|).
SignedLog delta(const RadiusFunction& rho, int n, double log_lambda);

/// log ∫_ℝ e^{-f}, integrated branch by branch in r.
double integrate_line(const LineConvexFunction& f);

}  // namespace santalo::measures
