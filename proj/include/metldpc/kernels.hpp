#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops of the decoders and the channel front end.
// Every kernel is per-element arithmetic (gather, multiply, min/max clamp,
// sign-bit logic), so the AVX2 variants are bit-identical to the scalar
// references; reductions stay scalar in the decoder for the same reason.
// The active implementation is picked once at startup from CPUID and can be
// forced with METLDPC_SIMD=scalar|avx2.

namespace metldpc::kernels {

struct Ops {
    const char* name;

    // out[i] = clamp(scale * x[i], -limit, +limit)
    void (*scale_clamp)(const double* x, std::size_t n, double scale,
                        double limit, double* out);

    // out[e] = clamp(per_node[node_of[e]] - sub[e], -limit, +limit)
    void (*gather_sub_clamp)(const double* per_node, const std::int32_t* node_of,
                             const double* sub, std::size_t n, double limit,
                             double* out);

    // Min-sum output assembly. For edge e attached to check c = cn_of[e]:
    //   mag    = (e == argmin_edge[c]) ? min2[c] : min1[c]
    //   out[e] = factor * mag, sign bit = signbit(sign_prod[c]) ^ signbit(in[e])
    void (*minsum_assemble)(const double* in, const std::int32_t* cn_of,
                            const double* min1, const double* min2,
                            const std::int32_t* argmin_edge,
                            const double* sign_prod, double factor,
                            std::size_t n, double* out);
};

const Ops& scalar_ops();

// nullptr when the CPU lacks AVX2.
const Ops* avx2_ops();

// Selected implementation (environment override honored).
const Ops& active();

}  // namespace metldpc::kernels
