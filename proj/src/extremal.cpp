#include "santalo/extremal.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "santalo/gammafn.hpp"

namespace santalo::extremal {

namespace {

constexpr double kResidualTol = 1e-8;

// log of the first term of m minus log of the second; same sign as m_λ.
double log_ratio(double z, int n, double log_lambda) {
    return -1.0 / z - (n + 2) * std::log(z) - log_lambda + z;
}

// Bisection in log z on a bracket where log_ratio changes sign.
double bisect(double lo, double hi, int n, double log_lambda) {
    const bool rising = log_ratio(lo, n, log_lambda) < 0.0;
    for (int i = 0; i < 400; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi)) break;
        const double h = log_ratio(mid, n, log_lambda);
        if (h == 0.0) return mid;
        if ((h < 0.0) == rising) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Has the sign of G'(a): log(e^{a + 1/a} γ(n+1, a) γ(n+1, 1/a)). The
// O(n log n) pieces are folded through Stirling so that only O(1) terms
// remain, which keeps the root accurate enough for the residual checks.
double stationarity(double a, int n) {
    const double s = n + 1.0;
    const double x = 1.0 / (a * s) - 1.0;
    return s * gammafn::detail::t_minus_log1p(x) - 1.5 * std::log(s) +
           0.5 * std::log(2.0 * std::numbers::pi) + gammafn::detail::stirling_error(s) +
           gammafn::detail::log_lower_series(s, a) + gammafn::reg_gamma(s, 1.0 / a).log_p;
}

}  // namespace

int m_sign(double z, int n, double log_lambda) {
    if (!(z > 0.0)) throw gammafn::DomainError("m_sign: z must be positive");
    const double lhs = -1.0 / z - (n + 2) * std::log(z);
    const double rhs = log_lambda - z;
    return (lhs > rhs) - (lhs < rhs);
}

double log_abs_m(double z, int n, double log_lambda) {
    const double lhs = -1.0 / z - (n + 2) * std::log(z);
    const double rhs = log_lambda - z;
    return SignedLog::difference(lhs, rhs).log_abs;
}

RootTriple roots_of_m(int n, double log_lambda) {
    if (n < 1) throw gammafn::DomainError("roots_of_m: n must be >= 1");
    // d/dz log_ratio = (z² - (n+2)z + 1)/z²: rising, falling, rising
    const double k = n + 2.0;
    const double lo_crit = 2.0 / (k + std::sqrt(k * k - 4.0));
    const double hi_crit = 1.0 / lo_crit;
    if (!(log_ratio(lo_crit, n, log_lambda) > 0.0) || !(log_ratio(hi_crit, n, log_lambda) < 0.0)) {
        throw OneRootCase("m_lambda changes sign only once for n = " + std::to_string(n) +
                          ", log lambda = " + std::to_string(log_lambda));
    }
    double lo = lo_crit;
    while (log_ratio(lo, n, log_lambda) >= 0.0) lo *= 0.5;
    double hi = hi_crit;
    while (log_ratio(hi, n, log_lambda) <= 0.0) hi *= 2.0;

    RootTriple out;
    out.n = n;
    out.log_lambda = log_lambda;
    out.z1 = bisect(lo, lo_crit, n, log_lambda);
    out.z2 = bisect(lo_crit, hi_crit, n, log_lambda);
    out.z3 = bisect(hi_crit, hi, n, log_lambda);
    return out;
}

bool has_sign_pattern(const RootTriple& r) {
    const int n = r.n;
    const double ll = r.log_lambda;
    return m_sign(0.5 * r.z1, n, ll) < 0 && m_sign(0.5 * (r.z1 + r.z2), n, ll) > 0 &&
           m_sign(0.5 * (r.z2 + r.z3), n, ll) < 0 && m_sign(2.0 * r.z3, n, ll) > 0;
}

ConvexProfile tent_profile(const TentParams& t) {
    if (!(t.a >= 0.0) || !std::isfinite(t.a)) throw InvalidProfile("tent: a must be finite and >= 0");
    if (!(t.b >= 0.0)) throw InvalidProfile("tent: b must be >= 0");
    if (!(t.x0 > 0.0) || !std::isfinite(t.x0)) throw InvalidProfile("tent: x0 must be positive");
    if (t.b == kInf) return ConvexProfile({{0, 0}, {t.x0, t.a * t.x0}}, kInf).canonical();
    return ConvexProfile({{0, 0}, {t.x0, t.a * t.x0}}, t.a + t.b).canonical();
}

TentParams t_map(const RadiusFunction& rho, const RootTriple& roots) {
    if (rho.is_unbounded()) throw ZeroProfile("t_map: profile is identically zero");
    if (rho.is_zero()) throw ZeroProfile("t_map: profile is the indicator of the origin");
    const double x1 = rho(roots.z1);
    const double x2 = rho(roots.z2);
    const double x3 = rho(roots.z3);
    TentParams t;
    t.a = roots.z1 / x1;
    if (!(x3 > x2)) {
        // ρ is constant on [z₂, z₃]: L₂ is the vertical line x = x₂
        t.b = kInf;
        t.x0 = x2;
        return t;
    }
    t.b = (roots.z3 - roots.z2) / (x3 - x2) - t.a;
    if (t.b <= 1e-12 * t.a) {
        // φ linear on [0, x₃]: L₁ = L₂
        t.b = 0.0;
        t.x0 = x1;
        return t;
    }
    t.x0 = ((t.a + t.b) * x2 - roots.z2) / t.b;
    return t;
}

double big_g(double a, int n) {
    if (!(a > 0.0)) throw gammafn::DomainError("G: a must be positive");
    const double num = log_add(-1.0 / a, n * std::log(a) + gammafn::log_lower_gamma(n + 1.0, 1.0 / a));
    const double den = log_add(gammafn::log_lower_gamma(n + 1.0, a), n * std::log(a) - a);
    return num - den;
}

double big_f(double a, double b, int n) {
    if (!(a > 0.0)) throw gammafn::DomainError("F: a must be positive");
    if (!(b >= 0.0)) throw gammafn::DomainError("F: b must be >= 0");
    if (b == kInf) return big_g(a, n);
    std::vector<double> n2_terms;
    std::vector<double> m2_terms;
    n2_terms.reserve(n + 1);
    m2_terms.reserve(n + 1);
    for (int j = 0; j <= n; ++j) {
        // (z + b)ⁿ = Σ_j C(n,j) b^j z^{n-j}
        if (b == 0.0 && j > 0) break;
        const double lb = j == 0 ? 0.0 : j * std::log(b);
        n2_terms.push_back(gammafn::log_binomial(n, j) + lb + gammafn::log_lower_gamma(j + 1.0, 1.0 / a));
        m2_terms.push_back(gammafn::log_binomial(n, j) + lb + gammafn::log_upper_gamma(n - j + 1.0, a));
    }
    const double log_n2 = log_sum(n2_terms);
    const double log_m2 = log_sum(m2_terms);
    const double log_apb = n * std::log(a + b);
    const double log_an = n * std::log(a);
    const double num = log_add(log_apb - 1.0 / a, log_an + log_n2);
    const double den = log_add(log_apb + gammafn::log_lower_gamma(n + 1.0, a), log_an + log_m2);
    return num - den;
}

LambdaEstimate solve_lambda(int n) {
    if (n < 1) throw gammafn::DomainError("solve_lambda: n must be >= 1");
    const double log_fact = gammafn::log_factorial(n);

    RootTriple wide;
    try {
        wide = roots_of_m(n, log_fact);
    } catch (const OneRootCase& e) {
        throw BracketFailure(std::string("m_{n!} lacks three sign changes: ") + e.what());
    }

    LambdaEstimate est;
    est.n = n;
    est.bracket = {wide.z1, wide.z2};

    // golden-section search for the maximum of log G on [z₁, z₂]
    const auto g = [n](double a) { return big_g(a, n); };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = wide.z1;
    double hi = wide.z2;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double g1 = g(x1);
    double g2 = g(x2);
    while (hi - lo > 1e-12 * hi) {
        if (g1 < g2) {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1);
        }
    }
    double a = 0.5 * (lo + hi);

    // G is flat at its maximum, so golden section alone stalls near sqrt(eps);
    // finish on the sign of G', which is exact to rounding.
    const auto omega = [n](double x) { return stationarity(x, n); };
    double step = 1e-7 * a;
    double left = a - step;
    double right = a + step;
    while (omega(left) <= 0.0 && left > wide.z1) left = std::max(wide.z1, a - (step *= 2.0));
    step = 1e-7 * a;
    while (omega(right) >= 0.0 && right < wide.z2) right = std::min(wide.z2, a + (step *= 2.0));
    if (omega(left) > 0.0 && omega(right) < 0.0) {
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (left + right);
            if (!(mid > left && mid < right)) break;
            if (omega(mid) > 0.0) {
                left = mid;
            } else {
                right = mid;
            }
        }
        a = 0.5 * (left + right);
    }

    est.a_n = a;
    est.log_lambda = g(a);
    est.residual_n1 = std::expm1(-1.0 / a - gammafn::log_lower_gamma(n + 1.0, a) - est.log_lambda);
    est.residual_n2 = std::expm1(a + gammafn::log_lower_gamma(n + 1.0, 1.0 / a) - est.log_lambda);
    est.lambda_hat_minus_1 = std::expm1(a + gammafn::reg_gamma(n + 1.0, 1.0 / a).log_p);

    // coarse scan for additional local maxima of G inside the bracket
    constexpr int kScan = 64;
    std::vector<double> scan(kScan + 1);
    for (int i = 0; i <= kScan; ++i) scan[i] = g(wide.z1 + (wide.z2 - wide.z1) * i / kScan);
    int peaks = 0;
    for (int i = 1; i < kScan; ++i)
        if (scan[i] > scan[i - 1] && scan[i] >= scan[i + 1]) ++peaks;
    est.single_peak = peaks <= 1;

    if (std::abs(est.residual_n1) > kResidualTol || std::abs(est.residual_n2) > kResidualTol) {
        throw StationarityFailure("stationarity residuals too large at n = " + std::to_string(n) +
                                  ": " + std::to_string(est.residual_n1) + ", " +
                                  std::to_string(est.residual_n2));
    }

    try {
        est.roots = roots_of_m(n, est.log_lambda);
    } catch (const OneRootCase&) {
        try {
            est.roots = roots_of_m(n, est.log_lambda + std::log1p(-1e-12));
        } catch (const OneRootCase& e) {
            throw BracketFailure(std::string("m_{lambda_n} lacks three sign changes: ") + e.what());
        }
    }
    if (!(a >= est.roots.z1 && a <= est.roots.z2))
        throw BracketFailure("maximizer outside [z1, z2] of m_{lambda_n} at n = " + std::to_string(n));
    return est;
}

std::pair<double, double> a_bracket(int n, double alpha) {
    if (!(alpha > 0.5 && alpha < 1.0)) throw gammafn::DomainError("a_bracket: alpha must lie in (1/2, 1)");
    if (n < 1) throw gammafn::DomainError("a_bracket: n must be >= 1");
    const double spread = std::pow(static_cast<double>(n), alpha);
    if (!(n - spread > 0.0)) throw BracketInvalid("a_bracket: n - n^alpha is not positive");
    const double lo = 1.0 / (n + spread);
    const double hi = 1.0 / (n - spread);
    const double log_fact = gammafn::log_factorial(n);
    const int s_lo = m_sign(lo, n, log_fact);
    const int s_mid = m_sign(1.0 / n, n, log_fact);
    const int s_hi = m_sign(hi, n, log_fact);
    if (s_lo >= 0 || s_mid <= 0 || s_hi >= 0) {
        throw BracketInvalid("a_bracket: sign pattern of m_{n!} at (1/(n+n^a), 1/n, 1/(n-n^a)) is (" +
                             std::to_string(s_lo) + ", " + std::to_string(s_mid) + ", " +
                             std::to_string(s_hi) + "), expected (-1, 1, -1)");
    }
    return {lo, hi};
}

std::vector<SignedLog> ck_coefficients(int n, double a, double log_lambda) {
    if (n < 1) throw gammafn::DomainError("ck_coefficients: n must be >= 1");
    if (!(a > 0.0 && a <= 1.0)) throw gammafn::DomainError("ck_coefficients: a must lie in (0, 1]");
    std::vector<SignedLog> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        const auto inner = SignedLog::difference(gammafn::log_lower_gamma(k + 1.0, 1.0 / a),
                                                 log_lambda + gammafn::log_upper_gamma(n - k + 1.0, a));
        out.push_back({inner.sign, inner.log_abs + gammafn::log_binomial(n - 1, k)});
    }
    return out;
}

SignedLog evaluate_polynomial(std::span<const SignedLog> coefficients, double b) {
    if (!(b > 0.0)) throw gammafn::DomainError("evaluate_polynomial: b must be positive");
    SignedLog sum;
    const double lb = std::log(b);
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        const auto& c = coefficients[k];
        sum = sum + SignedLog{c.sign, c.log_abs + static_cast<double>(k) * lb};
    }
    return sum;
}

}  // namespace santalo::extremal
