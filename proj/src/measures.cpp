#include "santalo/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "santalo/gammafn.hpp"
#include "santalo/quadrature.hpp"

namespace santalo::measures {

namespace {

void require_order(int n) {
    if (n < 1) throw gammafn::DomainError("dimension n must be >= 1");
}

// log ∫_lo^hi exp(h), where h(z) = log f(z) - log f(peak) is supplied in a
// form that stays accurate near the peak; the range is split into pieces
// that double in width away from the peak. When `concave` holds, pieces
// whose bound (width × value at the near end) is negligible are skipped.
template <class LogRatio>
double log_integrate(const LogRatio& h, double lo, double hi, double peak, double width, bool concave) {
    std::vector<double> cuts{lo, hi, peak};
    for (double step = width; peak - step > lo; step *= 2.0) cuts.push_back(peak - step);
    for (double step = width; peak + step < hi; step *= 2.0) cuts.push_back(peak + step);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto f = [&](double z) { return std::exp(h(z)); };
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        if (concave && a != peak && b != peak) {
            const double near = b <= peak ? b : a;
            if ((b - a) * f(near) < 1e-18 * width) continue;
        }
        sum += quad::integrate(f, a, b, 1e-13, 1e-17 * width);
    }
    return std::log(sum);
}

// ∫_a^b (αz + c)ⁿ e^{-z} dz on one linear piece of ρ.
double log_mu_segment(double alpha, double c, double a, double b, int n) {
    double peak = a;
    if (alpha > 0.0) peak = std::clamp(n - c / alpha, a, b);
    if (alpha * peak + c <= 0.0) peak = b;
    const double at_peak = alpha * peak + c;
    if (!(at_peak > 0.0)) return -kInf;
    const auto h = [=](double z) { return n * std::log1p(alpha * (z - peak) / at_peak) - (z - peak); };
    return n * std::log(at_peak) - peak + log_integrate(h, a, b, peak, std::sqrt(n + 1.0), true);
}

// ∫_Z^∞ (ρ_Z + β(z - Z))ⁿ e^{-z} dz = e^{-Z} Σ_k C(n,k) ρ_Z^{n-k} β^k k!
double log_mu_linear_tail(double z0, double rho0, double beta, int n) {
    std::vector<double> terms;
    terms.reserve(n + 1);
    const double log_rho = std::log(rho0);
    const double log_beta = std::log(beta);
    for (int k = 0; k <= n; ++k) {
        if (rho0 == 0.0 && k < n) continue;
        const double rho_part = k == n ? 0.0 : (n - k) * log_rho;
        terms.push_back(gammafn::log_binomial(n, k) + rho_part + k * log_beta +
                        gammafn::log_factorial(k));
    }
    return -z0 + log_sum(terms);
}

}  // namespace

double log_kappa(int n) {
    require_order(n);
    return 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0);
}

double vol_mu(const RadiusFunction& rho, int n) {
    require_order(n);
    if (rho.is_unbounded()) return kInf;
    if (rho.is_zero()) return -kInf;
    const auto& ks = rho.knots();
    std::vector<double> terms;
    terms.reserve(ks.size() + 1);
    for (std::size_t j = 0; j + 1 < ks.size(); ++j) {
        const double alpha = (ks[j + 1].rho - ks[j].rho) / (ks[j + 1].z - ks[j].z);
        const double c = ks[j].rho - alpha * ks[j].z;
        terms.push_back(log_mu_segment(alpha, c, ks[j].z, ks[j + 1].z, n));
    }
    const auto& last = ks.back();
    if (rho.tail() == TailKind::Constant) {
        terms.push_back(n * std::log(last.rho) - last.z);
    } else {
        terms.push_back(log_mu_linear_tail(last.z, last.rho, rho.tail_slope(), n));
    }
    const double out = log_sum(terms);
    if (std::isnan(out)) throw NonFinite("vol_mu: non-finite result on radius function");
    return out;
}

double vol_nu(const RadiusFunction& rho, int n) { return vol_mu(j_transform(rho), n); }

double vol_nu_direct(const RadiusFunction& rho, int n) {
    require_order(n);
    if (rho.is_unbounded()) return kInf;
    if (rho.is_zero()) return -kInf;
    const auto& ks = rho.knots();
    std::vector<double> terms;
    for (std::size_t j = 0; j + 1 < ks.size(); ++j) {
        const double a = ks[j].z;
        const double b = ks[j + 1].z;
        const double alpha = (ks[j + 1].rho - ks[j].rho) / (b - a);
        const double c = ks[j].rho - alpha * a;
        const auto logf = [=](double z) {
            if (z <= 0.0) return -kInf;
            return n * std::log(alpha * z + c) - 1.0 / z - (n + 2) * std::log(z);
        };
        // not log-concave in general: locate the peak by sampling
        const double start = a > 0.0 ? a : b * 1e-8;
        double peak = b;
        double best = logf(b);
        for (int i = 0; i <= 256; ++i) {
            const double z = start * std::pow(b / start, i / 256.0);
            if (logf(z) > best) {
                best = logf(z);
                peak = z;
            }
        }
        if (best == -kInf) continue;
        const double at_peak = alpha * peak + c;
        const auto h = [=](double z) {
            if (z <= 0.0) return -kInf;
            const double d = z - peak;
            return n * std::log1p(alpha * d / at_peak) + d / (z * peak) - (n + 2) * std::log1p(d / peak);
        };
        const double width = std::max(peak * 1e-3, (b - a) * 1e-6);
        terms.push_back(best + log_integrate(h, a, b, peak, width, false));
    }
    // tails in closed form: ∫_Z^∞ z^{k-n-2} e^{-1/z} dz = γ(n-k+1, 1/Z)
    const auto& last = ks.back();
    const double inv_z = last.z > 0.0 ? 1.0 / last.z : kInf;
    if (rho.tail() == TailKind::Constant) {
        terms.push_back(n * std::log(last.rho) + gammafn::log_lower_gamma(n + 1.0, inv_z));
    } else {
        const double beta = rho.tail_slope();
        const double c = std::max(0.0, last.rho - beta * last.z);
        for (int k = 0; k <= n; ++k) {
            if (c == 0.0 && k < n) continue;
            const double c_part = k == n ? 0.0 : (n - k) * std::log(c);
            terms.push_back(gammafn::log_binomial(n, k) + c_part +
                            k * std::log(beta) + gammafn::log_lower_gamma(n - k + 1.0, inv_z));
        }
    }
    return log_sum(terms);
}

VolumePair volumes(const RadiusFunction& rho, int n) {
    return {vol_mu(rho, n), vol_nu(rho, n), n};
}

double log_s_j_n(const RadiusFunction& rho, int n) {
    const auto v = volumes(rho, n);
    if (v.log_vol_mu == v.log_vol_nu && std::isinf(v.log_vol_mu)) return 0.0;
    if (!std::isfinite(v.log_vol_mu) || !std::isfinite(v.log_vol_nu))
        throw NonFinite("s_j_n: exactly one of the two volumes is degenerate");
    return v.log_vol_nu - v.log_vol_mu;
}

double s_j_n(const RadiusFunction& rho, int n) { return std::exp(log_s_j_n(rho, n)); }

SignedLog delta(const RadiusFunction& rho, int n, double log_lambda) {
    const auto v = volumes(rho, n);
    return SignedLog::difference(v.log_vol_nu, log_lambda + v.log_vol_mu);
}

namespace {

// log ∫₀^∞ e^{-ψ(r)} dr, segment by segment.
double log_branch_integral(const ConvexProfile& p) {
    const auto& ks = p.knots();
    std::vector<double> terms;
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
        const double dr = ks[i + 1].r - ks[i].r;
        const double m = (ks[i + 1].v - ks[i].v) / dr;
        if (m == 0.0) {
            terms.push_back(std::log(dr) - ks[i].v);
        } else {
            terms.push_back(-ks[i].v + std::log(-std::expm1(-m * dr)) - std::log(m));
        }
    }
    if (p.is_zero()) return kInf;
    if (!p.has_indicator_tail()) terms.push_back(-ks.back().v - std::log(p.tail_slope()));
    return log_sum(terms);
}

}  // namespace

double integrate_line(const LineConvexFunction& f) {
    return log_add(log_branch_integral(f.left), log_branch_integral(f.right));
}

}  // namespace santalo::measures
