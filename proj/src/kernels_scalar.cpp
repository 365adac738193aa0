#include "metldpc/kernels.hpp"

#include <algorithm>
#include <bit>

namespace metldpc::kernels {
namespace {

constexpr std::uint64_t kSignMask = 0x8000000000000000ull;

inline double apply_sign_bits(double mag, std::uint64_t sign_bits) {
    return std::bit_cast<double>(std::bit_cast<std::uint64_t>(mag) ^ sign_bits);
}

void scale_clamp_scalar(const double* x, std::size_t n, double scale,
                        double limit, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::min(limit, std::max(-limit, scale * x[i]));
    }
}

void gather_sub_clamp_scalar(const double* per_node, const std::int32_t* node_of,
                             const double* sub, std::size_t n, double limit,
                             double* out) {
    for (std::size_t e = 0; e < n; ++e) {
        out[e] = std::min(limit, std::max(-limit, per_node[node_of[e]] - sub[e]));
    }
}

void minsum_assemble_scalar(const double* in, const std::int32_t* cn_of,
                            const double* min1, const double* min2,
                            const std::int32_t* argmin_edge,
                            const double* sign_prod, double factor,
                            std::size_t n, double* out) {
    for (std::size_t e = 0; e < n; ++e) {
        const std::int32_t c = cn_of[e];
        const double mag =
            (static_cast<std::int32_t>(e) == argmin_edge[c]) ? min2[c] : min1[c];
        const std::uint64_t sign_bits =
            (std::bit_cast<std::uint64_t>(sign_prod[c]) ^
             std::bit_cast<std::uint64_t>(in[e])) &
            kSignMask;
        out[e] = apply_sign_bits(factor * mag, sign_bits);
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", scale_clamp_scalar, gather_sub_clamp_scalar,
                         minsum_assemble_scalar};
    return ops;
}

}  // namespace metldpc::kernels
