#pragma once

// Piecewise-linear geometric convex functions restricted to a ray, their
// level-set radius functions, and the duality transforms acting on them.
//
// A radial profile ψ on [0, ∞) is stored as its breakpoints plus a tail
// slope; a tail slope of +∞ means ψ jumps to +∞ past the last breakpoint.
// The radius function ρ(z) = sup{r : ψ(r) <= z} is the object every volume
// integral consumes, and the 𝒥 transform acts on it by ρ ↦ w·ρ(1/w).

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "santalo/logmath.hpp"

namespace santalo {

struct InvalidProfile : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Knot {
    double r = 0.0;
    double v = 0.0;
    friend bool operator==(const Knot&, const Knot&) = default;
};

/// Element of Cvx₀(ℝ⁺): convex, non-negative, non-decreasing, ψ(0) = 0.
class ConvexProfile {
public:
    /// Validates convexity and membership; throws InvalidProfile.
    ConvexProfile(std::vector<Knot> knots, double tail_slope);

    /// Convex indicator of [0, radius].
    static ConvexProfile indicator(double radius);
    /// ψ(r) = slope·r.
    static ConvexProfile linear(double slope);

    [[nodiscard]] const std::vector<Knot>& knots() const { return knots_; }
    [[nodiscard]] double tail_slope() const { return tail_slope_; }
    [[nodiscard]] bool has_indicator_tail() const { return tail_slope_ == kInf; }
    /// ψ ≡ 0.
    [[nodiscard]] bool is_zero() const { return tail_slope_ == 0.0; }
    /// Largest r with ψ(r) = 0 (+∞ for ψ ≡ 0).
    [[nodiscard]] double zero_set_radius() const;

    [[nodiscard]] double operator()(double r) const;

    /// Collinear breakpoints merged; a final segment matching the tail folded in.
    [[nodiscard]] ConvexProfile canonical() const;

private:
    std::vector<Knot> knots_;
    double tail_slope_;
};

struct RadiusKnot {
    double z = 0.0;
    double rho = 0.0;
    friend bool operator==(const RadiusKnot&, const RadiusKnot&) = default;
};

enum class TailKind {
    Constant,   ///< ρ stays at its last breakpoint value
    Linear,     ///< ρ grows with slope β > 0 past the last breakpoint
    Unbounded,  ///< ρ ≡ +∞ (the profile ψ ≡ 0); no breakpoints stored
};

/// Level-set radius z ↦ ρ(z): non-decreasing, concave, piecewise linear.
class RadiusFunction {
public:
    RadiusFunction(std::vector<RadiusKnot> knots, TailKind tail, double tail_slope = 0.0);

    static RadiusFunction unbounded();

    [[nodiscard]] const std::vector<RadiusKnot>& knots() const { return knots_; }
    [[nodiscard]] TailKind tail() const { return tail_; }
    /// β for a Linear tail, 0 for Constant, +∞ for Unbounded.
    [[nodiscard]] double tail_slope() const { return tail_slope_; }
    [[nodiscard]] bool is_unbounded() const { return tail_ == TailKind::Unbounded; }
    /// ρ ≡ 0, i.e. the profile is the indicator of {0}.
    [[nodiscard]] bool is_zero() const;

    [[nodiscard]] double operator()(double z) const;

    [[nodiscard]] RadiusFunction canonical() const;

    /// z ↦ c·ρ(z), c > 0.
    [[nodiscard]] RadiusFunction scaled(double c) const;

private:
    std::vector<RadiusKnot> knots_;
    TailKind tail_;
    double tail_slope_;
};

/// Two one-sided profiles forming a convex function on ℝ that vanishes at 0.
struct LineConvexFunction {
    ConvexProfile left;   ///< x ↦ f(-x) for x >= 0
    ConvexProfile right;  ///< x ↦ f(x) for x >= 0

    [[nodiscard]] double operator()(double x) const { return x < 0 ? left(-x) : right(x); }
};

RadiusFunction to_radius(const ConvexProfile& p);

/// Inverse of to_radius on canonical representatives; throws InvalidProfile
/// on an unusable radius function.
ConvexProfile from_radius(const RadiusFunction& rho);

/// ρ_𝒥(w) = w·ρ(1/w); an exact involution on the piecewise-linear class.
RadiusFunction j_transform(const RadiusFunction& rho);

/// 𝒥ψ computed through the radius route.
ConvexProfile j_transform(const ConvexProfile& p);

/// Radial Legendre transform (ℒψ)(s) = sup_{r>=0} (rs - ψ(r)).
ConvexProfile legendre(const ConvexProfile& p);

/// Pointwise radial polarity (𝒜ψ)(s) = sup_{y>=0} (sy - 1)/ψ(y), with
/// positive/0 = +∞, nonpositive/0 = 0 and finite/∞ = 0.
double polarity(const ConvexProfile& p, double s);

/// 𝒜ψ as an exact profile: the upper envelope of the per-breakpoint
/// candidates (r_i s - 1)/v_i, the tail limit s/t and 0, cut off at 1/c.
ConvexProfile polar_profile(const ConvexProfile& p);

/// ψ ↦ ψ(a·), a > 0; level sets shrink by 1/a.
ConvexProfile scale(const ConvexProfile& p, double a);

/// Level intervals [-l(z), r(z)] replaced by centred intervals of equal length.
ConvexProfile symmetrize_line(const LineConvexFunction& f);

/// Same transform, branch by branch; the n = 1 picture of 𝒥 on the line.
LineConvexFunction j_transform(const LineConvexFunction& f);

/// Pointwise average of two radius functions (used by symmetrization).
RadiusFunction average(const RadiusFunction& a, const RadiusFunction& b);

/// Geometric grid 1e-3..1e3 with 200 points plus every breakpoint of the inputs.
std::vector<double> evaluation_grid(std::span<const ConvexProfile> profiles);

/// Largest |f(s) - g(s)| over the grid. +∞ = +∞ counts as no deviation; a
/// finite/infinite mismatch is re-tested a relative 1e-10 to either side so
/// that domain endpoints computed along different routes still compare.
template <class F, class G>
double max_deviation(const F& f, const G& g, std::span<const double> grid);

/// max over grid of |𝒥ψ(s) - ℒ(𝒜ψ)(s)|.
double check_j_factorization(const ConvexProfile& p, std::span<const double> grid);

/// Canonical breakpoint lists equal to relative tolerance rtol.
bool approx_equal(const ConvexProfile& a, const ConvexProfile& b, double rtol = 1e-12);
bool approx_equal(const RadiusFunction& a, const RadiusFunction& b, double rtol = 1e-12);

// ---------------------------------------------------------------------------

namespace detail {
inline double gap(double a, double b) {
    if (a == kInf && b == kInf) return 0.0;
    if (a == kInf || b == kInf) return kInf;
    return std::abs(a - b);
}
}  // namespace detail

template <class F, class G>
double max_deviation(const F& f, const G& g, std::span<const double> grid) {
    double worst = 0.0;
    for (double s : grid) {
        double d = detail::gap(f(s), g(s));
        if (d == kInf && s > 0.0) {
            for (double nudge : {1.0 - 1e-10, 1.0 + 1e-10})
                d = std::min(d, detail::gap(f(s * nudge), g(s * nudge)));
        }
        worst = std::max(worst, d);
    }
    return worst;
}

}  // namespace santalo
