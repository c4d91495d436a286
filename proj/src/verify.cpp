#include "santalo/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "santalo/extremal.hpp"
#include "santalo/gammafn.hpp"
#include "santalo/measures.hpp"

namespace santalo::verify {

namespace {

constexpr double kTransformTol = 1e-9;
constexpr double kIntegralTol = 1e-10;
constexpr double kSubstitutionTol = 1e-12;
constexpr double kCertificateTol = 1e-8;
constexpr double kTentTol = 1e-10;
constexpr int kMaxDeltaOrder = 8;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Largest amount by which lo(s) exceeds hi(s) on the grid (negative if never).
template <class F, class G>
double order_violation(const F& lo, const G& hi, std::span<const double> grid) {
    const auto excess = [](double a, double b) {
        if (b == kInf) return -kInf;
        if (a == kInf) return kInf;
        return a - b;
    };
    double worst = -kInf;
    for (double s : grid) {
        double e = excess(lo(s), hi(s));
        if (e == kInf && s > 0.0) {
            for (double nudge : {1.0 - 1e-10, 1.0 + 1e-10}) e = std::min(e, excess(lo(s * nudge), hi(s * nudge)));
        }
        worst = std::max(worst, e);
    }
    return worst;
}

struct Context {
    SuiteReport& report;
    const ProfileSampler& sampler;

    void note(const std::string& key, double value, bool larger_is_worse = true) {
        auto [it, fresh] = report.worst.try_emplace(key, value);
        if (!fresh) it->second = larger_is_worse ? std::max(it->second, value) : std::min(it->second, value);
    }
    void fail(std::uint64_t index, const std::string& what) {
        report.failures.push_back({index, sampler.case_seed(index), what});
    }
};

using CaseBody = std::function<void(Context&, std::uint64_t, std::mt19937_64&)>;

void for_cases(Context& ctx, int cases, const CaseBody& body) {
    for (int i = 0; i < cases; ++i) {
        const auto index = static_cast<std::uint64_t>(i);
        std::mt19937_64 rng(ctx.sampler.case_seed(index));
        try {
            body(ctx, index, rng);
        } catch (const std::exception& e) {
            ctx.fail(index, std::string("exception: ") + e.what());
        }
    }
}

const std::vector<extremal::LambdaEstimate>& lambdas() {
    static const std::vector<extremal::LambdaEstimate> table = [] {
        std::vector<extremal::LambdaEstimate> t;
        for (int n = 1; n <= kMaxDeltaOrder; ++n) t.push_back(extremal::solve_lambda(n));
        return t;
    }();
    return table;
}

// Canonical tents have at most one interior breakpoint.
bool is_tent_shape(const ConvexProfile& p) { return p.canonical().knots().size() <= 2; }

double radius_gap(const RadiusFunction& a, const RadiusFunction& b) {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double z = std::pow(10.0, -3.0 + 6.0 * i / 199.0);
        const double x = a(z);
        const double y = b(z);
        worst = std::max(worst, std::abs(x - y) / (1.0 + std::abs(x)));
    }
    return worst;
}

// -------------------------------------------------------------------------

void suite_involution(Context& ctx, int cases) {
    for_cases(ctx, cases, [](Context& c, std::uint64_t i, std::mt19937_64& rng) {
        const auto p = c.sampler.draw(rng);
        const auto rho = to_radius(p);
        const auto back = j_transform(j_transform(rho));
        const auto profile_back = j_transform(j_transform(p));
        std::array<ConvexProfile, 2> both{p, profile_back};
        const double dev = max_deviation(p, profile_back, evaluation_grid(both));
        c.note("pointwise", dev);
        if (!approx_equal(rho, back)) c.fail(i, "J(J(rho)) differs from rho");
        if (!approx_equal(p, profile_back)) c.fail(i, "J(J(psi)) differs from psi");
        if (dev > kTransformTol) c.fail(i, "pointwise involution gap " + fmt(dev));
    });
}

void suite_order_preserving(Context& ctx, int cases) {
    for_cases(ctx, cases, [](Context& c, std::uint64_t i, std::mt19937_64& rng) {
        const auto p = c.sampler.draw(rng);
        const auto q = add(p, c.sampler.draw(rng));
        const auto jp = j_transform(p);
        const auto jq = j_transform(q);
        std::array<ConvexProfile, 4> all{p, q, jp, jq};
        const auto grid = evaluation_grid(all);
        const double base = order_violation(p, q, grid);
        const double v = order_violation(jp, jq, grid);
        c.note("violation", v);
        if (base > kTransformTol) c.fail(i, "sampled pair is not ordered");
        if (v > kTransformTol) c.fail(i, "J reverses order by " + fmt(v));
    });
}

void suite_order_reversing(Context& ctx, int cases) {
    for_cases(ctx, cases, [](Context& c, std::uint64_t i, std::mt19937_64& rng) {
        const auto p = c.sampler.draw(rng);
        const auto q = add(p, c.sampler.draw(rng));
        const auto lp = legendre(p);
        const auto lq = legendre(q);
        std::array<ConvexProfile, 4> all{p, q, lp, lq};
        const auto grid = evaluation_grid(all);
        const double vl = order_violation(lq, lp, grid);
        const double va = order_violation([&](double s) { return polarity(q, s); },
                                          [&](double s) { return polarity(p, s); }, grid);
        c.note("violation_legendre", vl);
        c.note("violation_polarity", va);
        if (vl > kTransformTol) c.fail(i, "L fails to reverse order by " + fmt(vl));
        if (va > kTransformTol) c.fail(i, "A fails to reverse order by " + fmt(va));
    });
}

void suite_factorization(Context& ctx, int cases) {
    for_cases(ctx, cases, [](Context& c, std::uint64_t i, std::mt19937_64& rng) {
        const auto p = c.sampler.draw(rng);
        std::array<ConvexProfile, 3> all{p, j_transform(p), legendre(polar_profile(p))};
        const double dev = check_j_factorization(p, evaluation_grid(all));
        c.note("deviation", dev);
        if (dev > kTransformTol) c.fail(i, "J and L(A) differ by " + fmt(dev));
    });
}

void suite_scaling(Context& ctx, int cases) {
    for_cases(ctx, cases, [](Context& c, std::uint64_t i, std::mt19937_64& rng) {
        const auto p = c.sampler.draw(rng);
        const int n = 1 + static_cast<int>(i % kMaxDeltaOrder);
        const double base = measures::log_s_j_n(to_radius(p), n);
        for (double a : {0.1, 1.0, 7.0}) {
            const double scaled = measures::log_s_j_n(to_radius(scale(p, a)), n);
            const double rel = std::abs(std::expm1(scaled - base));
            c.note("relative", rel);
            if (rel > kIntegralTol) c.fail(i, "s_J changes under scaling by " + fmt(a) + ": " + fmt(rel));
        }
    });
}

void suite_substitution(Context& ctx, int cases) {
    for_cases(ctx, cases, [](Context& c, std::uint64_t i, std::mt19937_64& rng) {
        const auto rho = to_radius(c.sampler.draw(rng));
        const int n = 1 + static_cast<int>(i % 50);
        const double via_j = measures::vol_nu(rho, n);
        const double direct = measures::vol_nu_direct(rho, n);
        const double rel = std::abs(std::expm1(direct - via_j));
        c.note("relative", rel);
        if (rel > kSubstitutionTol) c.fail(i, "nu direct vs substituted differ by " + fmt(rel));
    });
}

void suite_reciprocal(Context& ctx, int cases) {
    for_cases(ctx, cases, [](Context& c, std::uint64_t i, std::mt19937_64& rng) {
        const auto rho = to_radius(c.sampler.draw(rng));
        const int n = 1 + static_cast<int>(i % kMaxDeltaOrder);
        const double sum = measures::log_s_j_n(rho, n) + measures::log_s_j_n(j_transform(rho), n);
        const double rel = std::abs(std::expm1(sum));
        c.note("relative", rel);
        if (rel > kIntegralTol) c.fail(i, "s_J(rho) s_J(J rho) - 1 = " + fmt(rel));
    });
}

void suite_delta(Context& ctx, int cases) {
    const auto& table = lambdas();
    for_cases(ctx, cases, [&table](Context& c, std::uint64_t i, std::mt19937_64& rng) {
        const auto rho = to_radius(c.sampler.draw(rng));
        for (int n = 1; n <= kMaxDeltaOrder; ++n) {
            const auto d = measures::delta(rho, n, table[n - 1].log_lambda);
            const double ratio = d.sign * std::exp(d.log_abs - measures::vol_mu(rho, n));
            c.note("delta_over_mu", ratio);
            if (ratio > 1e-9) c.fail(i, "n = " + std::to_string(n) + ": delta/mu = " + fmt(ratio));
        }
    });
}

void suite_upper_bound(Context& ctx, int cases) {
    const auto& table = lambdas();
    for_cases(ctx, cases, [&table](Context& c, std::uint64_t i, std::mt19937_64& rng) {
        const auto rho = to_radius(c.sampler.draw(rng));
        for (int n = 1; n <= kMaxDeltaOrder; ++n) {
            const double excess = std::expm1(measures::log_s_j_n(rho, n) - table[n - 1].log_lambda);
            c.note("relative_excess", excess);
            if (excess > kCertificateTol)
                c.fail(i, "n = " + std::to_string(n) + ": s_J exceeds lambda_n by " + fmt(excess));
        }
    });
}

void suite_t_improvement(Context& ctx, int cases) {
    const auto& table = lambdas();
    for_cases(ctx, cases, [&table](Context& c, std::uint64_t i, std::mt19937_64& rng) {
        const auto p = c.sampler.draw(rng);
        const auto rho = to_radius(p);
        for (int n = 1; n <= kMaxDeltaOrder; ++n) {
            const auto& est = table[n - 1];
            const auto tent = to_radius(extremal::tent_profile(extremal::t_map(rho, est.roots)));
            // margin in units of λₙ μ₂(epi ψ), the size of the terms that cancel
            const double log_scale = est.log_lambda + measures::vol_mu(rho, n);
            const auto d0 = measures::delta(rho, n, est.log_lambda);
            const auto d1 = measures::delta(tent, n, est.log_lambda);
            const double margin =
                d1.sign * std::exp(d1.log_abs - log_scale) - d0.sign * std::exp(d0.log_abs - log_scale);
            c.note("min_margin", margin, false);
            const std::string tag = "n = " + std::to_string(n) + ": ";
            if (margin < -kTentTol) c.fail(i, tag + "T lowers delta by " + fmt(-margin));
            const bool tent_like = is_tent_shape(p) || radius_gap(rho, tent) < kTentTol;
            if (!tent_like) {
                c.note("min_strict_margin", margin, false);
                if (!(margin > 0.0)) c.fail(i, tag + "no strict improvement on a non-tent input");
            }
        }
    });
}

LineConvexFunction draw_line(const ProfileSampler& s, std::mt19937_64& rng) {
    auto left = s.draw(rng);
    auto right = s.draw(rng);
    return {left, right};
}

void suite_steiner_commute(Context& ctx, int cases) {
    for_cases(ctx, cases, [](Context& c, std::uint64_t i, std::mt19937_64& rng) {
        const auto f = draw_line(c.sampler, rng);
        const auto sym_then_j = j_transform(symmetrize_line(f));
        const auto j_then_sym = symmetrize_line(j_transform(f));
        std::array<ConvexProfile, 2> both{sym_then_j, j_then_sym};
        const double dev = max_deviation(sym_then_j, j_then_sym, evaluation_grid(both));
        c.note("deviation", dev);
        if (dev > kTransformTol) c.fail(i, "symmetrization and J fail to commute: " + fmt(dev));
    });
}

void suite_steiner_volume(Context& ctx, int cases) {
    for_cases(ctx, cases, [](Context& c, std::uint64_t i, std::mt19937_64& rng) {
        const auto f = draw_line(c.sampler, rng);
        const double line = measures::integrate_line(f);
        const double sym = std::log(2.0) + measures::vol_mu(to_radius(symmetrize_line(f)), 1);
        const double rel = std::abs(std::expm1(sym - line));
        c.note("relative", rel);
        if (rel > kIntegralTol) c.fail(i, "integral changes under symmetrization: " + fmt(rel));
    });
}

void suite_gamma(Context& ctx) {
    int checked = 0;
    for (int n = 1; n <= 300; ++n) {
        for (int j = 0; j < 40; ++j) {
            const double a = std::pow(10.0, -6.0 + 6.0 * j / 39.0);
            ++checked;
            if (!gammafn::check_small_a_bound(n, a))
                ctx.fail(0, "small-a bound fails at n = " + std::to_string(n) + ", a = " + fmt(a));
        }
    }
    for (int n = 1; n <= 50; ++n) {
        for (int k = 1; k <= 19; ++k) {
            const double t = 0.1 * k * (n + 1);
            ++checked;
            if (!gammafn::check_tail_bound(n, t))
                ctx.fail(0, "tail bound fails at n = " + std::to_string(n) + ", t = " + fmt(t));
        }
    }
    for (int m = 1; m <= 500; ++m) {
        ++checked;
        if (!gammafn::check_gamma_half(m)) ctx.fail(0, "Q(m+1, m) < 1/2 at m = " + std::to_string(m));
    }
    ctx.report.cases = checked;
}

void suite_ck(Context& ctx) {
    int checked = 0;
    for (int n = 2; n <= 100; ++n) {
        ++checked;
        try {
            const auto est = extremal::solve_lambda(n);
            const auto c = extremal::ck_coefficients(n, est.a_n, est.log_lambda);
            int positive = 0;
            for (const auto& ck : c) positive += ck.sign >= 0;
            ctx.note("nonnegative_coefficients", positive);
            if (positive > 0)
                ctx.fail(0, "n = " + std::to_string(n) + ": " + std::to_string(positive) + " coefficients >= 0");
            for (double b : {0.1, 1.0, 10.0, 100.0}) {
                if (extremal::evaluate_polynomial(c, b).sign >= 0)
                    ctx.fail(0, "n = " + std::to_string(n) + ": P(" + fmt(b) + ") >= 0");
            }
        } catch (const std::exception& e) {
            ctx.fail(0, "n = " + std::to_string(n) + ": " + e.what());
        }
    }
    ctx.report.cases = checked;
}

struct SuiteInfo {
    const char* name;
    std::uint64_t seed;
    int cases;
};

constexpr std::array<SuiteInfo, 14> kSuites{{
    {"involution", 42, 1000},
    {"order-preserving", 11, 1000},
    {"order-reversing", 13, 1000},
    {"factorization", 17, 1000},
    {"scaling-invariance", 19, 1000},
    {"nu-mu-substitution", 23, 1000},
    {"reciprocal-pair", 29, 1000},
    {"delta-nonpositive", 7, 1000},
    {"t-improvement", 31, 1000},
    {"upper-bound-sjn", 37, 1000},
    {"steiner-commute-1d", 3, 500},
    {"steiner-volume-1d", 5, 500},
    {"gamma-inequalities", 0, 1},
    {"ck-negative", 0, 1},
}};

const SuiteInfo& lookup(std::string_view name) {
    for (const auto& s : kSuites)
        if (name == s.name) return s;
    std::string list;
    for (const auto& s : kSuites) list += std::string(list.empty() ? "" : ", ") + s.name;
    throw UnknownSuite("unknown suite '" + std::string(name) + "'; valid suites: " + list);
}

}  // namespace

std::uint64_t ProfileSampler::case_seed(std::uint64_t index) const { return splitmix64(seed ^ splitmix64(index)); }

ConvexProfile ProfileSampler::draw(std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> segments(1, max_segments);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int k = segments(rng);
    double slope = unit(rng) < 0.2 ? 0.0 : expo(rng) * slope_scale;
    std::vector<Knot> knots{{0.0, 0.0}};
    double r = 0.0;
    double v = 0.0;
    for (int i = 0; i < k; ++i) {
        const double dr = (expo(rng) + 1e-3) * radius_scale;
        r += dr;
        v += slope * dr;
        knots.push_back({r, v});
        slope += expo(rng) * slope_scale;
    }
    const double tail = unit(rng) < 0.25 ? kInf : slope;
    return ConvexProfile(std::move(knots), tail).canonical();
}

ConvexProfile ProfileSampler::sample(std::uint64_t seed_value) const {
    std::mt19937_64 rng(seed_value);
    return draw(rng);
}

ConvexProfile add(const ConvexProfile& p, const ConvexProfile& q) {
    const auto end_of = [](const ConvexProfile& x) { return x.has_indicator_tail() ? x.knots().back().r : kInf; };
    const double end = std::min(end_of(p), end_of(q));
    std::vector<double> rs;
    for (const auto& k : p.knots())
        if (k.r <= end) rs.push_back(k.r);
    for (const auto& k : q.knots())
        if (k.r <= end) rs.push_back(k.r);
    if (end < kInf) rs.push_back(end);
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    std::vector<Knot> knots;
    knots.reserve(rs.size());
    for (double r : rs) knots.push_back({r, p(r) + q(r)});
    const double tail = end < kInf ? kInf : p.tail_slope() + q.tail_slope();
    return ConvexProfile(std::move(knots), tail).canonical();
}

namespace {

nlohmann::ordered_json report_json(const SuiteReport& r) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["seed"] = r.seed;
    j["cases"] = r.cases;
    j["passed"] = r.passed();
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : r.failures)
        j["failures"].push_back({{"case", f.case_index}, {"case_seed", f.case_seed}, {"description", f.description}});
    j["worst"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.worst) {
        if (std::isfinite(v)) {
            j["worst"][k] = v;
        } else {
            j["worst"][k] = v > 0 ? "inf" : "-inf";
        }
    }
    return j;
}

}  // namespace

std::string to_json(const SuiteReport& report) { return report_json(report).dump(2); }

std::string to_json(const std::vector<SuiteReport>& reports) {
    nlohmann::ordered_json j;
    bool all = true;
    j["suites"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        all = all && r.passed();
        j["suites"].push_back(report_json(r));
    }
    j["passed"] = all;
    return j.dump(2);
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& s : kSuites) out.emplace_back(s.name);
        return out;
    }();
    return names;
}

std::uint64_t default_seed(std::string_view suite) { return lookup(suite).seed; }

int default_cases(std::string_view suite) { return lookup(suite).cases; }

SuiteReport run_suite(std::string_view name, const ProfileSampler& sampler, int cases) {
    const auto& info = lookup(name);
    if (cases < 1) throw std::invalid_argument("run_suite: cases must be positive");
    SuiteReport report;
    report.suite = info.name;
    report.seed = sampler.seed;
    report.cases = cases;
    Context ctx{report, sampler};

    const std::string key(name);
    if (key == "involution") suite_involution(ctx, cases);
    else if (key == "order-preserving") suite_order_preserving(ctx, cases);
    else if (key == "order-reversing") suite_order_reversing(ctx, cases);
    else if (key == "factorization") suite_factorization(ctx, cases);
    else if (key == "scaling-invariance") suite_scaling(ctx, cases);
    else if (key == "nu-mu-substitution") suite_substitution(ctx, cases);
    else if (key == "reciprocal-pair") suite_reciprocal(ctx, cases);
    else if (key == "delta-nonpositive") suite_delta(ctx, cases);
    else if (key == "t-improvement") suite_t_improvement(ctx, cases);
    else if (key == "upper-bound-sjn") suite_upper_bound(ctx, cases);
    else if (key == "steiner-commute-1d") suite_steiner_commute(ctx, cases);
    else if (key == "steiner-volume-1d") suite_steiner_volume(ctx, cases);
    else if (key == "gamma-inequalities") suite_gamma(ctx);
    else if (key == "ck-negative") suite_ck(ctx);
    return report;
}

BruteForceResult brute_force_lambda(int n, int grid_a, int grid_b) {
    if (n < 1 || grid_a < 2 || grid_b < 3) throw std::invalid_argument("brute_force_lambda: grid too small");
    std::vector<double> bs{0.0};
    for (int j = 0; j < grid_b - 2; ++j) bs.push_back(std::pow(10.0, -3.0 + 7.0 * j / (grid_b - 3)));
    bs.push_back(kInf);

    BruteForceResult best;
    best.log_lambda = -kInf;
    best.log_best_finite_b = -kInf;
    for (int i = 0; i < grid_a; ++i) {
        const double a = 0.01 * std::pow(500.0, static_cast<double>(i) / (grid_a - 1));
        for (double b : bs) {
            const auto rho = to_radius(extremal::tent_profile({a, b, 1.0}));
            const double value = measures::vol_nu_direct(rho, n) - measures::vol_mu(rho, n);
            if (b < kInf) best.log_best_finite_b = std::max(best.log_best_finite_b, value);
            if (value > best.log_lambda) {
                best.log_lambda = value;
                best.a = a;
                best.b = b;
            }
        }
    }
    return best;
}

}  // namespace santalo::verify
