#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "santalo/profile.hpp"
#include "santalo/profile_io.hpp"
#include "santalo/verify.hpp"

using namespace santalo;

namespace {

verify::ProfileSampler sampler(std::uint64_t seed) {
    verify::ProfileSampler s;
    s.seed = seed;
    return s;
}

std::vector<double> grid_for(std::initializer_list<ConvexProfile> ps) {
    std::vector<ConvexProfile> v(ps);
    return evaluation_grid(v);
}

// sup over a dense y grid (plus breakpoints and y -> ∞) of (sy - 1)/ψ(y)
double polarity_oracle(const ConvexProfile& p, double s) {
    const auto ratio = [](double num, double den) {
        if (den == kInf) return 0.0;
        if (den == 0.0) return num > 0.0 ? kInf : 0.0;
        return num / den;
    };
    double best = 0.0;
    std::vector<double> ys;
    const double top = p.has_indicator_tail() ? p.knots().back().r : 1e6;
    for (int i = 0; i <= 20000; ++i) ys.push_back(top * i / 20000.0);
    for (const auto& k : p.knots()) ys.push_back(k.r);
    for (double y : ys) best = std::max(best, ratio(s * y - 1.0, p(y)));
    if (!p.has_indicator_tail()) best = std::max(best, s / p.tail_slope());
    return best;
}

}  // namespace

TEST_CASE("profile validation") {
    CHECK_THROWS_AS(ConvexProfile({{0, 0}, {1, 2}, {2, 3}}, 5.0), InvalidProfile);  // concave kink
    CHECK_THROWS_AS(ConvexProfile({{0, 1}, {1, 2}}, 5.0), InvalidProfile);          // ψ(0) != 0
    CHECK_THROWS_AS(ConvexProfile({{0, 0}, {1, 1}}, 0.5), InvalidProfile);          // tail below last slope
    CHECK_THROWS_AS(ConvexProfile({{0, 0}, {1, 1}, {1, 2}}, 5.0), InvalidProfile);  // r not increasing
    CHECK_NOTHROW(ConvexProfile({{0, 0}, {1, 0}}, kInf));
    CHECK_NOTHROW(ConvexProfile({{0, 0}}, 0.0));
}

TEST_CASE("to_radius examples") {
    const auto ind = to_radius(ConvexProfile::indicator(1.0));
    CHECK(ind.tail() == TailKind::Constant);
    for (double z : {0.0, 0.3, 5.0, 1e6}) CHECK(ind(z) == 1.0);

    const double a = 2.5;
    const auto lin = to_radius(ConvexProfile::linear(a));
    CHECK(lin.tail() == TailKind::Linear);
    CHECK(lin.tail_slope() == doctest::Approx(1.0 / a));
    for (double z : {0.0, 0.3, 5.0}) CHECK(lin(z) == doctest::Approx(z / a));

    const auto tent = to_radius(ConvexProfile({{0, 0}, {1, a}}, kInf));
    for (double z : {0.0, 0.5, 2.0, 2.5, 3.0, 100.0}) CHECK(tent(z) == doctest::Approx(std::min(z / a, 1.0)));
}

TEST_CASE("zero profile and zero set") {
    const auto zero = ConvexProfile({{0, 0}}, 0.0);
    CHECK(zero.is_zero());
    CHECK(to_radius(zero).is_unbounded());
    const auto flat = ConvexProfile({{0, 0}, {2, 0}, {3, 1}}, 4.0);
    CHECK(flat.zero_set_radius() == 2.0);
    CHECK(to_radius(flat)(0.0) == 2.0);
}

TEST_CASE("from_radius examples and round trip") {
    CHECK(approx_equal(from_radius(RadiusFunction({{0, 1}}, TailKind::Constant)), ConvexProfile::indicator(1.0)));
    CHECK(approx_equal(from_radius(RadiusFunction({{0, 0}}, TailKind::Linear, 0.25)), ConvexProfile::linear(4.0)));
    CHECK_THROWS_AS(from_radius(RadiusFunction({{0, 1}, {1, 0.5}}, TailKind::Constant)), InvalidProfile);
    CHECK_THROWS_AS(from_radius(RadiusFunction({{0, 0}, {1, 1}, {2, 3}}, TailKind::Constant)), InvalidProfile);
    const auto s = sampler(101);
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto p = s.sample(s.case_seed(i));
        CHECK(approx_equal(from_radius(to_radius(p)), p));
    }
}

TEST_CASE("J on radius functions") {
    const auto one = RadiusFunction({{0, 1}}, TailKind::Constant);
    const auto j1 = j_transform(one);
    for (double w : {0.0, 0.5, 3.0}) CHECK(j1(w) == doctest::Approx(w));

    const double a = 3.0;
    const auto tent = to_radius(ConvexProfile({{0, 0}, {1, a}}, kInf));
    const auto jt = j_transform(tent);
    for (double w : {0.0, 0.1, 1.0 / a, 1.0, 10.0}) CHECK(jt(w) == doctest::Approx(std::min(w, 1.0 / a)));
    // 𝒥ψ_{B,a} = ψ_{(1/a)B, 1/a}: slope 1 up to radius 1/a, then +∞
    CHECK(approx_equal(j_transform(ConvexProfile({{0, 0}, {1, a}}, kInf)), ConvexProfile({{0, 0}, {1 / a, 1 / a}}, kInf)));

    const auto s = sampler(102);
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto rho = to_radius(s.sample(s.case_seed(i)));
        CHECK(approx_equal(j_transform(j_transform(rho)), rho));
        for (double w : {0.01, 0.7, 4.0}) CHECK(j_transform(rho)(w) == doctest::Approx(w * rho(1.0 / w)).epsilon(1e-12));
    }
}

TEST_CASE("closure: J and L do not add more than one segment") {
    const auto s = sampler(103);
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto p = s.sample(s.case_seed(i));
        const auto segments = p.knots().size();  // interior segments + tail
        CHECK(j_transform(p).knots().size() <= segments + 1);
        CHECK(legendre(p).knots().size() <= segments + 1);
    }
}

TEST_CASE("Legendre examples and involution") {
    CHECK(approx_equal(legendre(ConvexProfile::indicator(1.0)), ConvexProfile::linear(1.0)));
    CHECK(approx_equal(legendre(ConvexProfile::linear(1.0)), ConvexProfile::indicator(1.0)));
    const auto s = sampler(104);
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto p = s.sample(s.case_seed(i));
        CHECK(approx_equal(legendre(legendre(p)), p));
        // pointwise against sup_r (rs - ψ(r)) over breakpoints
        const auto lp = legendre(p);
        for (double x : {0.05, 0.8, 3.0}) {
            double best = 0.0;
            for (const auto& k : p.knots()) best = std::max(best, k.r * x - k.v);
            if (!p.has_indicator_tail() && x > p.tail_slope()) best = kInf;
            if (best == kInf) {
                CHECK(lp(x) == kInf);
            } else {
                CHECK(lp(x) == doctest::Approx(best).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("polarity examples") {
    const auto ind = ConvexProfile::indicator(1.0);
    for (double s : {0.0, 0.5, 0.999, 1.0}) CHECK(polarity(ind, s) == 0.0);
    for (double s : {1.001, 2.0, 50.0}) CHECK(polarity(ind, s) == kInf);
    for (double s : {0.0, 0.25, 1.0, 1.5, 2.0, 4.0}) CHECK(polarity(ind, s) == polarity_oracle(ind, s));

    const double a = 2.0;
    const auto lin = ConvexProfile::linear(a);
    for (double s : {0.0, 0.3, 1.0, 7.0}) {
        CHECK(polarity(lin, s) == doctest::Approx(s / a));
        CHECK(polarity_oracle(lin, s) == doctest::Approx(s / a).epsilon(1e-5));
    }
}

TEST_CASE("polarity against the dense-grid oracle") {
    const auto s = sampler(105);
    for (std::uint64_t i = 0; i < 60; ++i) {
        const auto p = s.sample(s.case_seed(i));
        for (double x : {0.01, 0.2, 1.0, 3.0, 20.0}) {
            const double exact = polarity(p, x);
            const double oracle = polarity_oracle(p, x);
            if (exact == kInf) {
                CHECK(oracle == kInf);
            } else {
                // the grid oracle approaches the sup from below
                CHECK(oracle <= exact * (1 + 1e-12) + 1e-12);
                CHECK(oracle >= exact * (1 - 1e-3) - 1e-9);
            }
        }
    }
}

TEST_CASE("polarity is an involution") {
    const auto s = sampler(106);
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto p = s.sample(s.case_seed(i));
        const auto ap = polar_profile(p);
        for (double x : {0.01, 0.3, 1.1, 4.0}) {
            if (p(x) == kInf) continue;
            CHECK(polarity(ap, x) == doctest::Approx(p(x)).epsilon(1e-9));
        }
        const auto grid = grid_for({p, ap});
        CHECK(max_deviation([&](double x) { return polarity(p, x); }, ap, grid) <= 1e-9);
    }
}

TEST_CASE("J factors as L after A") {
    CHECK(check_j_factorization(ConvexProfile::linear(2.0), grid_for({ConvexProfile::linear(2.0)})) == 0.0);
    const auto lin = j_transform(ConvexProfile::linear(2.0));
    CHECK(approx_equal(lin, ConvexProfile::indicator(0.5)));
    CHECK(check_j_factorization(ConvexProfile::indicator(1.0), grid_for({ConvexProfile::indicator(1.0)})) == 0.0);
    const auto s = sampler(107);
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto p = s.sample(s.case_seed(i));
        CHECK(check_j_factorization(p, grid_for({p, j_transform(p)})) <= 1e-9);
    }
}

TEST_CASE("scaling") {
    CHECK(approx_equal(scale(ConvexProfile::indicator(1.0), 2.0), ConvexProfile::indicator(0.5)));
    const auto s = sampler(108);
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto p = s.sample(s.case_seed(i));
        CHECK(approx_equal(scale(p, 1.0), p));
        for (double a : {0.1, 7.0}) {
            const auto rho = to_radius(p);
            const auto rho_a = to_radius(scale(p, a));
            for (double z : {0.0, 0.2, 1.5, 9.0}) CHECK(rho_a(z) == doctest::Approx(rho(z) / a).epsilon(1e-12));
            for (double r : {0.1, 1.0}) {
                const double v = p(a * r);
                if (v == kInf) {
                    CHECK(scale(p, a)(r) == kInf);
                } else {
                    CHECK(scale(p, a)(r) == doctest::Approx(v).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("order preservation and reversal") {
    const auto s = sampler(109);
    for (std::uint64_t i = 0; i < 100; ++i) {
        std::mt19937_64 rng(s.case_seed(i));
        const auto p = s.draw(rng);
        const auto q = verify::add(p, s.draw(rng));
        for (double x : {0.05, 0.5, 2.0, 10.0}) {
            CHECK(p(x) <= q(x) * (1 + 1e-14));
            const double jp = j_transform(p)(x);
            const double jq = j_transform(q)(x);
            CHECK((jq == kInf || jp <= jq + 1e-9 * (1 + std::abs(jq))));
            const double lp = legendre(p)(x);
            const double lq = legendre(q)(x);
            CHECK((lp == kInf || lq <= lp + 1e-9 * (1 + std::abs(lp))));
            const double ap = polarity(p, x);
            const double aq = polarity(q, x);
            CHECK((ap == kInf || aq <= ap + 1e-9 * (1 + std::abs(ap))));
        }
    }
}

TEST_CASE("symmetrization on the line") {
    const LineConvexFunction f{ConvexProfile::linear(3.0), ConvexProfile::linear(1.0)};
    const auto sym = symmetrize_line(f);
    // level interval [-z/3, z] has half-length 2z/3
    for (double z : {0.0, 0.6, 3.0}) CHECK(to_radius(sym)(z) == doctest::Approx(2.0 * z / 3.0));

    const auto s = sampler(110);
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto p = s.sample(s.case_seed(i));
        CHECK(approx_equal(symmetrize_line({p, p}), p));
        std::mt19937_64 rng(s.case_seed(i) + 1);
        const LineConvexFunction g{s.draw(rng), s.draw(rng)};
        const auto a = j_transform(symmetrize_line(g));
        const auto b = symmetrize_line(j_transform(g));
        CHECK(max_deviation(a, b, grid_for({a, b})) <= 1e-9);
    }
}

TEST_CASE("canonical form merges collinear breakpoints") {
    const ConvexProfile p({{0, 0}, {1, 1}, {2, 2}, {3, 4}}, 2.0);
    const auto c = p.canonical();
    CHECK(c.knots().size() == 2);
    CHECK(c.tail_slope() == 2.0);
    CHECK(approx_equal(p, c));
}

TEST_CASE("profile JSON round trip") {
    const ConvexProfile p({{0, 0}, {0.5, 0.25}, {2, 4}}, kInf);
    const auto text = io::format_profile(p);
    CHECK(text == "{\"breakpoints\": [[0, 0], [0.5, 0.25], [2, 4]], \"tail_slope\": \"inf\"}\n");
    CHECK(approx_equal(io::parse_profile(text), p));
    const auto lin = io::parse_profile(R"({"breakpoints": [[0, 0]], "tail_slope": 1.5})");
    CHECK(approx_equal(lin, ConvexProfile::linear(1.5)));
    // J twice gives the same bytes when reciprocals are exact
    const ConvexProfile dyadic({{0, 0}, {0.5, 0.25}, {1, 1}, {4, 8}}, 4.0);
    CHECK(io::format_profile(j_transform(j_transform(dyadic))) == io::format_profile(dyadic));
    // otherwise to a few ulps
    const auto s = sampler(111);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto q = s.sample(s.case_seed(i));
        CHECK(approx_equal(io::parse_profile(io::format_profile(j_transform(j_transform(q)))), q, 1e-13));
    }
}

TEST_CASE("profile JSON diagnostics") {
    const auto message = [](const char* text) {
        try {
            io::parse_profile(text);
        } catch (const io::ParseError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("{\"breakpoints\": [[0,0],\n [1,2] \"tail_slope\": 1}").find("line 2") != std::string::npos);
    CHECK(message(R"({"breakpoints": [[0,0],[1,"x"]], "tail_slope": 3})").find("breakpoints[1][1]") != std::string::npos);
    CHECK(message(R"({"breakpoints": [[0,0]], "tail_slope": "big"})").find("tail_slope") != std::string::npos);
    CHECK(message(R"({"breakpoints": [[0,0]]})").find("tail_slope: missing") != std::string::npos);
    CHECK(message(R"({"breakpoints": [[0,0]], "tail_slope": 1, "x": 2})").find("unknown field") != std::string::npos);
    CHECK(message(R"({"breakpoints": [[0,0],[1,2],[2,3]], "tail_slope": 9})").find("profile:") != std::string::npos);
}
