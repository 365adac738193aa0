#include "metldpc/jfunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace metldpc {
namespace {

// log2(1 + exp(-x)), stable on both tails
double log2_1p_exp_neg(double x) {
    constexpr double inv_ln2 = 1.4426950408889634;
    if (x >= 0.0) return std::log1p(std::exp(-x)) * inv_ln2;
    return (-x + std::log1p(std::exp(x))) * inv_ln2;
}

}  // namespace

double j_function(double mu) {
    if (mu <= 0.0) return 0.0;
    if (mu >= kMaxDensityMean) return 1.0;
    const double var = 2.0 * mu;
    const double sigma = std::sqrt(var);
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    auto integrand = [&](double x) {
        const double d = x - mu;
        return norm * std::exp(-d * d / (2.0 * var)) * log2_1p_exp_neg(x);
    };
    const double lo = mu - 12.0 * sigma;
    const double hi = mu + 12.0 * sigma;
    const double loss =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            integrand, lo, hi, 15, 1e-12);
    return std::clamp(1.0 - loss, 0.0, 1.0);
}

double j_inverse(double mi) {
    if (mi <= 0.0) return 0.0;
    if (mi >= 1.0) return kMaxDensityMean;
    double lo = 0.0;
    double hi = 1.0;
    while (j_function(hi) < mi) {
        hi *= 2.0;
        if (hi >= kMaxDensityMean) return kMaxDensityMean;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (j_function(mid) < mi)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace metldpc
