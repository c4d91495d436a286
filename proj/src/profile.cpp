#include "santalo/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace santalo {

namespace {

constexpr double kMergeTol = 1e-12;

bool nearly(double a, double b, double rtol) {
    if (a == b) return true;
    return std::abs(a - b) <= rtol * std::max(std::abs(a), std::abs(b));
}

double slope(const Knot& a, const Knot& b) { return (b.v - a.v) / (b.r - a.r); }
double slope(const RadiusKnot& a, const RadiusKnot& b) { return (b.rho - a.rho) / (b.z - a.z); }

[[noreturn]] void fail(const std::string& what) { throw InvalidProfile(what); }

std::string at(std::size_t i) { return "breakpoint " + std::to_string(i) + ": "; }

}  // namespace

// ---------------------------------------------------------------------------
// ConvexProfile

ConvexProfile::ConvexProfile(std::vector<Knot> knots, double tail_slope)
    : knots_(std::move(knots)), tail_slope_(tail_slope) {
    if (knots_.empty()) fail("profile needs at least the origin breakpoint");
    if (knots_.front().r != 0.0 || knots_.front().v != 0.0)
        fail("profile must start at (0, 0)");
    if (std::isnan(tail_slope_) || tail_slope_ < 0.0) fail("tail slope must be in [0, +inf]");
    double prev_slope = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const auto& a = knots_[i - 1];
        const auto& b = knots_[i];
        if (!std::isfinite(b.r) || !std::isfinite(b.v)) fail(at(i) + "coordinates must be finite");
        if (!(b.r > a.r)) fail(at(i) + "radii must be strictly increasing");
        if (b.v < a.v) fail(at(i) + "values must be non-decreasing");
        const double s = slope(a, b);
        if (s < prev_slope && !nearly(s, prev_slope, kMergeTol))
            fail(at(i) + "slopes must be non-decreasing (convexity)");
        prev_slope = std::max(s, prev_slope);
    }
    if (tail_slope_ < prev_slope && !nearly(tail_slope_, prev_slope, kMergeTol))
        fail("tail slope must be at least the final segment slope");
}

ConvexProfile ConvexProfile::indicator(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) fail("indicator radius must be positive");
    return ConvexProfile({{0, 0}, {radius, 0}}, kInf);
}

ConvexProfile ConvexProfile::linear(double slope) {
    if (!(slope > 0.0) || !std::isfinite(slope)) fail("linear slope must be positive and finite");
    return ConvexProfile({{0, 0}}, slope);
}

double ConvexProfile::zero_set_radius() const {
    if (is_zero()) return kInf;
    double c = 0.0;
    for (const auto& k : knots_)
        if (k.v == 0.0) c = k.r;
    return c;
}

double ConvexProfile::operator()(double r) const {
    if (r < 0.0) return kInf;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), r,
                                     [](double x, const Knot& k) { return x < k.r; });
    if (it == knots_.end()) {
        const auto& last = knots_.back();
        if (r == last.r) return last.v;
        if (tail_slope_ == kInf) return kInf;
        return last.v + tail_slope_ * (r - last.r);
    }
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return lo.v + (hi.v - lo.v) * ((r - lo.r) / (hi.r - lo.r));
}

ConvexProfile ConvexProfile::canonical() const {
    std::vector<Knot> out;
    out.reserve(knots_.size());
    for (const auto& k : knots_) {
        out.push_back(k);
        while (out.size() >= 3 &&
               nearly(slope(out[out.size() - 3], out[out.size() - 2]),
                      slope(out[out.size() - 2], out.back()), kMergeTol)) {
            out.erase(out.end() - 2);
        }
    }
    if (tail_slope_ != kInf && out.size() >= 2 &&
        nearly(slope(out[out.size() - 2], out.back()), tail_slope_, kMergeTol)) {
        out.pop_back();
    }
    return ConvexProfile(std::move(out), tail_slope_);
}

// ---------------------------------------------------------------------------
// RadiusFunction

RadiusFunction::RadiusFunction(std::vector<RadiusKnot> knots, TailKind tail, double tail_slope)
    : knots_(std::move(knots)), tail_(tail), tail_slope_(tail_slope) {
    if (tail_ == TailKind::Unbounded) {
        knots_.clear();
        tail_slope_ = kInf;
        return;
    }
    if (knots_.empty()) fail("radius function needs a breakpoint at z = 0");
    if (knots_.front().z != 0.0) fail("radius function must start at z = 0");
    if (!(knots_.front().rho >= 0.0) || !std::isfinite(knots_.front().rho))
        fail("radius at z = 0 must be finite and non-negative");
    double prev_slope = kInf;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const auto& a = knots_[i - 1];
        const auto& b = knots_[i];
        if (!std::isfinite(b.z) || !std::isfinite(b.rho)) fail(at(i) + "coordinates must be finite");
        if (!(b.z > a.z)) fail(at(i) + "heights must be strictly increasing");
        if (b.rho < a.rho) fail(at(i) + "radius must be non-decreasing");
        const double s = slope(a, b);
        if (s > prev_slope && !nearly(s, prev_slope, kMergeTol))
            fail(at(i) + "radius must be concave");
        prev_slope = std::min(s, prev_slope);
    }
    if (tail_ == TailKind::Constant) {
        tail_slope_ = 0.0;
    } else {
        if (!(tail_slope_ > 0.0) || !std::isfinite(tail_slope_))
            fail("linear radius tail needs a finite positive slope");
        if (tail_slope_ > prev_slope && !nearly(tail_slope_, prev_slope, kMergeTol))
            fail("radius tail slope exceeds the final segment slope (not concave)");
    }
}

RadiusFunction RadiusFunction::unbounded() { return RadiusFunction({}, TailKind::Unbounded); }

bool RadiusFunction::is_zero() const {
    return tail_ == TailKind::Constant && knots_.back().rho == 0.0;
}

double RadiusFunction::operator()(double z) const {
    if (tail_ == TailKind::Unbounded) return kInf;
    if (z < 0.0) return 0.0;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), z,
                                     [](double x, const RadiusKnot& k) { return x < k.z; });
    if (it == knots_.end()) {
        const auto& last = knots_.back();
        return last.rho + tail_slope_ * (z - last.z);
    }
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return lo.rho + (hi.rho - lo.rho) * ((z - lo.z) / (hi.z - lo.z));
}

RadiusFunction RadiusFunction::canonical() const {
    if (tail_ == TailKind::Unbounded) return *this;
    std::vector<RadiusKnot> out;
    out.reserve(knots_.size());
    for (const auto& k : knots_) {
        out.push_back(k);
        while (out.size() >= 3 &&
               nearly(slope(out[out.size() - 3], out[out.size() - 2]),
                      slope(out[out.size() - 2], out.back()), kMergeTol)) {
            out.erase(out.end() - 2);
        }
    }
    while (out.size() >= 2 && nearly(slope(out[out.size() - 2], out.back()), tail_slope_, kMergeTol))
        out.pop_back();
    return RadiusFunction(std::move(out), tail_, tail_slope_);
}

RadiusFunction RadiusFunction::scaled(double c) const {
    if (!(c > 0.0) || !std::isfinite(c)) fail("radius scale factor must be positive");
    if (is_unbounded()) return *this;
    auto ks = knots_;
    for (auto& k : ks) k.rho *= c;
    return RadiusFunction(std::move(ks), tail_, tail_slope_ * c);
}

// ---------------------------------------------------------------------------
// Conversions

RadiusFunction to_radius(const ConvexProfile& input) {
    if (input.is_zero()) return RadiusFunction::unbounded();
    const auto p = input.canonical();
    const auto& ks = p.knots();
    std::size_t k = 0;
    while (k + 1 < ks.size() && ks[k + 1].v == 0.0) ++k;
    std::vector<RadiusKnot> out;
    out.reserve(ks.size() - k);
    out.push_back({0.0, ks[k].r});
    for (std::size_t i = k + 1; i < ks.size(); ++i) out.push_back({ks[i].v, ks[i].r});
    if (p.has_indicator_tail()) return RadiusFunction(std::move(out), TailKind::Constant);
    return RadiusFunction(std::move(out), TailKind::Linear, 1.0 / p.tail_slope());
}

ConvexProfile from_radius(const RadiusFunction& input) {
    if (input.is_unbounded()) return ConvexProfile({{0, 0}}, 0.0);
    const auto rho = input.canonical();
    const auto& ks = rho.knots();
    std::vector<Knot> out;
    out.reserve(ks.size() + 1);
    out.push_back({0, 0});
    if (ks.front().rho > 0.0) out.push_back({ks.front().rho, 0.0});
    for (std::size_t j = 1; j < ks.size(); ++j) {
        if (!(ks[j].rho > out.back().r))
            fail("radius function must be strictly increasing before a constant tail");
        out.push_back({ks[j].rho, ks[j].z});
    }
    const double tail = rho.tail() == TailKind::Constant ? kInf : 1.0 / rho.tail_slope();
    return ConvexProfile(std::move(out), tail).canonical();
}

// ---------------------------------------------------------------------------
// Transforms

RadiusFunction j_transform(const RadiusFunction& input) {
    if (input.is_unbounded()) return input;
    const auto rho = input.canonical();
    const auto& ks = rho.knots();
    std::vector<RadiusKnot> out;
    out.reserve(ks.size());
    // the tail of ρ becomes the segment of ρ_𝒥 starting at w = 0
    out.push_back({0.0, rho.tail() == TailKind::Linear ? rho.tail_slope() : 0.0});
    for (std::size_t j = ks.size() - 1; j >= 1; --j)
        out.push_back({1.0 / ks[j].z, ks[j].rho / ks[j].z});
    const double rho0 = ks.front().rho;
    if (rho0 > 0.0) return RadiusFunction(std::move(out), TailKind::Linear, rho0).canonical();
    return RadiusFunction(std::move(out), TailKind::Constant).canonical();
}

ConvexProfile j_transform(const ConvexProfile& p) {
    return from_radius(j_transform(to_radius(p)));
}

LineConvexFunction j_transform(const LineConvexFunction& f) {
    return {j_transform(f.left), j_transform(f.right)};
}

ConvexProfile legendre(const ConvexProfile& input) {
    if (input.is_zero()) return ConvexProfile({{0, 0}}, kInf);
    const auto p = input.canonical();
    const auto& ks = p.knots();
    std::vector<Knot> out;
    out.reserve(ks.size() + 1);
    out.push_back({0, 0});
    // on the slope interval [s_{i-1}, s_i] the supremum sits at r_i
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
        const double s = slope(ks[i], ks[i + 1]);
        if (s > out.back().r) out.push_back({s, ks[i].r * s - ks[i].v});
    }
    const auto& last = ks.back();
    if (p.has_indicator_tail()) return ConvexProfile(std::move(out), last.r).canonical();
    const double t = p.tail_slope();
    if (t > out.back().r) out.push_back({t, last.r * t - last.v});
    return ConvexProfile(std::move(out), kInf).canonical();
}

namespace {

struct Line {
    double slope;
    double intercept;
    [[nodiscard]] double at(double s) const { return slope * s + intercept; }
};

// Candidate affine minorants whose maximum is 𝒜ψ below the cutoff 1/c.
std::vector<Line> polar_candidates(const ConvexProfile& p) {
    std::vector<Line> lines{{0.0, 0.0}};
    for (const auto& k : p.knots())
        if (k.v > 0.0) lines.push_back({k.r / k.v, -1.0 / k.v});
    if (!p.has_indicator_tail()) lines.push_back({1.0 / p.tail_slope(), 0.0});
    return lines;
}

}  // namespace

double polarity(const ConvexProfile& p, double s) {
    if (s < 0.0) return kInf;
    if (p.is_zero()) return s > 0.0 ? kInf : 0.0;
    const double c = p.zero_set_radius();
    if (s * c > 1.0) return kInf;
    double best = 0.0;
    for (const auto& l : polar_candidates(p)) best = std::max(best, l.at(s));
    return best;
}

ConvexProfile polar_profile(const ConvexProfile& input) {
    if (input.is_zero()) return ConvexProfile({{0, 0}}, kInf);
    const auto p = input.canonical();
    const double c = p.zero_set_radius();
    const double cutoff = c > 0.0 ? 1.0 / c : kInf;
    const auto lines = polar_candidates(p);

    // walk the upper envelope from s = 0; every candidate has value <= 0 there
    auto current = *std::max_element(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        return a.intercept < b.intercept || (a.intercept == b.intercept && a.slope < b.slope);
    });
    std::vector<Knot> out{{0, 0}};
    double s_cur = 0.0;
    while (true) {
        double next_s = kInf;
        const Line* next = nullptr;
        for (const auto& l : lines) {
            if (l.slope <= current.slope) continue;
            const double x = std::max(s_cur, (current.intercept - l.intercept) / (l.slope - current.slope));
            if (x < next_s || (x == next_s && next && l.slope > next->slope)) {
                next_s = x;
                next = &l;
            }
        }
        if (!next || next_s >= cutoff) break;
        if (next_s > s_cur) out.push_back({next_s, std::max(0.0, current.at(next_s))});
        current = *next;
        s_cur = next_s;
    }
    if (cutoff == kInf) return ConvexProfile(std::move(out), current.slope).canonical();
    if (cutoff > s_cur) out.push_back({cutoff, std::max(0.0, current.at(cutoff))});
    return ConvexProfile(std::move(out), kInf).canonical();
}

ConvexProfile scale(const ConvexProfile& p, double a) {
    if (!(a > 0.0) || !std::isfinite(a)) fail("scale factor must be positive and finite");
    auto ks = p.knots();
    for (auto& k : ks) k.r /= a;
    return ConvexProfile(std::move(ks), p.tail_slope() * a);
}

RadiusFunction average(const RadiusFunction& a, const RadiusFunction& b) {
    if (a.is_unbounded() || b.is_unbounded()) return RadiusFunction::unbounded();
    std::vector<double> zs;
    for (const auto& k : a.knots()) zs.push_back(k.z);
    for (const auto& k : b.knots()) zs.push_back(k.z);
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    std::vector<RadiusKnot> out;
    out.reserve(zs.size());
    for (double z : zs) out.push_back({z, 0.5 * (a(z) + b(z))});
    const double beta = 0.5 * (a.tail_slope() + b.tail_slope());
    if (beta > 0.0) return RadiusFunction(std::move(out), TailKind::Linear, beta).canonical();
    return RadiusFunction(std::move(out), TailKind::Constant).canonical();
}

ConvexProfile symmetrize_line(const LineConvexFunction& f) {
    return from_radius(average(to_radius(f.left), to_radius(f.right)));
}

// ---------------------------------------------------------------------------
// Checks

std::vector<double> evaluation_grid(std::span<const ConvexProfile> profiles) {
    constexpr int kPoints = 200;
    std::vector<double> grid;
    grid.reserve(kPoints + 8 * profiles.size());
    for (int i = 0; i < kPoints; ++i) grid.push_back(std::pow(10.0, -3.0 + 6.0 * i / (kPoints - 1)));
    for (const auto& p : profiles)
        for (const auto& k : p.knots()) grid.push_back(k.r);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

double check_j_factorization(const ConvexProfile& p, std::span<const double> grid) {
    const auto via_radius = j_transform(p);
    const auto via_duals = legendre(polar_profile(p));
    return max_deviation(via_radius, via_duals, grid);
}

bool approx_equal(const ConvexProfile& a, const ConvexProfile& b, double rtol) {
    const auto ca = a.canonical();
    const auto cb = b.canonical();
    if (ca.knots().size() != cb.knots().size()) return false;
    if (!nearly(ca.tail_slope(), cb.tail_slope(), rtol)) return false;
    for (std::size_t i = 0; i < ca.knots().size(); ++i) {
        if (!nearly(ca.knots()[i].r, cb.knots()[i].r, rtol)) return false;
        if (!nearly(ca.knots()[i].v, cb.knots()[i].v, rtol)) return false;
    }
    return true;
}

bool approx_equal(const RadiusFunction& a, const RadiusFunction& b, double rtol) {
    const auto ca = a.canonical();
    const auto cb = b.canonical();
    if (ca.tail() != cb.tail()) return false;
    if (ca.is_unbounded()) return true;
    if (ca.knots().size() != cb.knots().size()) return false;
    if (!nearly(ca.tail_slope(), cb.tail_slope(), rtol)) return false;
    for (std::size_t i = 0; i < ca.knots().size(); ++i) {
        if (!nearly(ca.knots()[i].z, cb.knots()[i].z, rtol)) return false;
        if (!nearly(ca.knots()[i].rho, cb.knots()[i].rho, rtol)) return false;
    }
    return true;
}

}  // namespace santalo
