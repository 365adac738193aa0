#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace metldpc {

// Internal message saturation. Far above any decision-relevant magnitude,
// well below where exp/tanh lose meaning.
inline constexpr double kLlrSaturation = 38.0;

inline double saturate_llr(double x) {
    return std::clamp(x, -kLlrSaturation, kLlrSaturation);
}

// Log-likelihood ratio; positive value favors bit 0.
struct Llr {
    double value = 0.0;

    // sign component, in {-1, +1}
    double alpha() const { return value < 0.0 ? -1.0 : 1.0; }
    // magnitude component, >= 0
    double beta() const { return std::fabs(value); }
};

// Exact pairwise correction term
//   s(b1, b2) = log( (1 + exp(-(b1+b2))) / (1 + exp(-|b1-b2|)) ),
// evaluated with log1p on non-positive exponents. Always <= 0.
inline double correction_term(double beta1, double beta2) {
    return std::log1p(std::exp(-(beta1 + beta2))) -
           std::log1p(std::exp(-std::fabs(beta1 - beta2)));
}

// Closed-form approximation of the correction term for 0 <= beta1 <= beta2:
//   s(b1, b2) ~= -2 b1 / (1 + exp(b2)).
inline double correction_term_approx(double beta1, double beta2) {
    return -2.0 * beta1 / (1.0 + std::exp(beta2));
}

// Exact binary check-node combiner:
//   a (+) b = sign(a) sign(b) ( min(|a|,|b|) + s(|a|,|b|) ).
inline double box_plus(double a, double b) {
    const double b1 = std::fabs(a);
    const double b2 = std::fabs(b);
    double mag = std::min(b1, b2) + correction_term(b1, b2);
    if (mag < 0.0) mag = 0.0;
    return ((a < 0.0) != (b < 0.0)) ? -mag : mag;
}

inline Llr box_plus(Llr a, Llr b) { return {box_plus(a.value, b.value)}; }

// Tanh-scaled approximate combiner:
//   a (+) b ~= sign(a) sign(b) min(|a|,|b|) tanh(max(|a|,|b|) / 2).
inline double approx_box_plus(double a, double b) {
    const double b1 = std::fabs(a);
    const double b2 = std::fabs(b);
    const double mag = std::min(b1, b2) * std::tanh(std::max(b1, b2) / 2.0);
    return ((a < 0.0) != (b < 0.0)) ? -mag : mag;
}

inline Llr approx_box_plus(Llr a, Llr b) {
    return {approx_box_plus(a.value, b.value)};
}

// Tanh-scaled check-node update, one output per edge:
//   out_i = (prod_{k != i} sign(in_k)) * beta_m * prod_{l != i,m} tanh(beta_l / 2)
// with m the index of the smallest magnitude among k != i (lowest index on
// ties, re-evaluated per output). Degree-1 check emits 0. Reference kernel;
// decoders use specialized loops.
inline void cn_update_tanh_scaled(std::span<const double> in, std::span<double> out) {
    const std::size_t d = in.size();
    if (d == 1) {
        out[0] = 0.0;
        return;
    }
    for (std::size_t i = 0; i < d; ++i) {
        std::size_t m = d;
        double min_beta = 0.0;
        bool neg = false;
        for (std::size_t k = 0; k < d; ++k) {
            if (k == i) continue;
            const double b = std::fabs(in[k]);
            if (m == d || b < min_beta) {
                m = k;
                min_beta = b;
            }
            neg ^= (in[k] < 0.0);
        }
        double mag = min_beta;
        for (std::size_t l = 0; l < d; ++l) {
            if (l == i || l == m) continue;
            mag *= std::tanh(std::fabs(in[l]) / 2.0);
        }
        out[i] = neg ? -mag : mag;
    }
}

}  // namespace metldpc
