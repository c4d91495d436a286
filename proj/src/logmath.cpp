#include "santalo/logmath.hpp"

#include <algorithm>

namespace santalo {

namespace {

double pairwise_log_sum(std::span<const double> terms) {
    if (terms.empty()) return -kInf;
    if (terms.size() == 1) return terms.front();
    const auto half = terms.size() / 2;
    return log_add(pairwise_log_sum(terms.first(half)),
                   pairwise_log_sum(terms.subspan(half)));
}

}  // namespace

double log_sum(std::span<const double> terms) {
    return pairwise_log_sum(terms);
}

SignedLog operator+(const SignedLog& x, const SignedLog& y) {
    if (x.sign == 0) return y;
    if (y.sign == 0) return x;
    if (x.sign == y.sign) return {x.sign, log_add(x.log_abs, y.log_abs)};
    // opposite signs: the larger magnitude wins
    if (x.log_abs == y.log_abs) return {};
    const auto& big = x.log_abs > y.log_abs ? x : y;
    const auto& small = x.log_abs > y.log_abs ? y : x;
    return {big.sign, log_sub(big.log_abs, small.log_abs)};
}

}  // namespace santalo
