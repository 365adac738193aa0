#include "metldpc/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <bit>

namespace metldpc::kernels {
namespace {

constexpr std::uint64_t kSignMask = 0x8000000000000000ull;

__attribute__((target("avx2"))) void scale_clamp_avx2(const double* x,
                                                      std::size_t n, double scale,
                                                      double limit, double* out) {
    const __m256d vscale = _mm256_set1_pd(scale);
    const __m256d vhi = _mm256_set1_pd(limit);
    const __m256d vlo = _mm256_set1_pd(-limit);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_mul_pd(vscale, _mm256_loadu_pd(x + i));
        v = _mm256_min_pd(vhi, _mm256_max_pd(vlo, v));
        _mm256_storeu_pd(out + i, v);
    }
    for (; i < n; ++i) {
        const double v = scale * x[i];
        out[i] = v > limit ? limit : (v < -limit ? -limit : v);
    }
}

__attribute__((target("avx2"))) void gather_sub_clamp_avx2(
    const double* per_node, const std::int32_t* node_of, const double* sub,
    std::size_t n, double limit, double* out) {
    const __m256d vhi = _mm256_set1_pd(limit);
    const __m256d vlo = _mm256_set1_pd(-limit);
    std::size_t e = 0;
    for (; e + 4 <= n; e += 4) {
        const __m128i idx =
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(node_of + e));
        __m256d v = _mm256_i32gather_pd(per_node, idx, 8);
        v = _mm256_sub_pd(v, _mm256_loadu_pd(sub + e));
        v = _mm256_min_pd(vhi, _mm256_max_pd(vlo, v));
        _mm256_storeu_pd(out + e, v);
    }
    for (; e < n; ++e) {
        const double v = per_node[node_of[e]] - sub[e];
        out[e] = v > limit ? limit : (v < -limit ? -limit : v);
    }
}

__attribute__((target("avx2"))) void minsum_assemble_avx2(
    const double* in, const std::int32_t* cn_of, const double* min1,
    const double* min2, const std::int32_t* argmin_edge, const double* sign_prod,
    double factor, std::size_t n, double* out) {
    const __m256d vfactor = _mm256_set1_pd(factor);
    const __m256d vsign_mask =
        _mm256_castsi256_pd(_mm256_set1_epi64x(static_cast<long long>(kSignMask)));
    std::size_t e = 0;
    for (; e + 4 <= n; e += 4) {
        const __m128i cidx =
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(cn_of + e));
        const __m256d v1 = _mm256_i32gather_pd(min1, cidx, 8);
        const __m256d v2 = _mm256_i32gather_pd(min2, cidx, 8);
        const __m128i am = _mm_i32gather_epi32(argmin_edge, cidx, 4);
        const __m128i eid = _mm_add_epi32(
            _mm_set1_epi32(static_cast<int>(e)), _mm_setr_epi32(0, 1, 2, 3));
        const __m256d is_min =
            _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm_cmpeq_epi32(eid, am)));
        const __m256d mag = _mm256_blendv_pd(v1, v2, is_min);

        const __m256d sp = _mm256_i32gather_pd(sign_prod, cidx, 8);
        const __m256d vin = _mm256_loadu_pd(in + e);
        const __m256d sign_bits =
            _mm256_and_pd(_mm256_xor_pd(sp, vin), vsign_mask);
        _mm256_storeu_pd(out + e,
                         _mm256_xor_pd(_mm256_mul_pd(vfactor, mag), sign_bits));
    }
    for (; e < n; ++e) {
        const std::int32_t c = cn_of[e];
        const double mag =
            (static_cast<std::int32_t>(e) == argmin_edge[c]) ? min2[c] : min1[c];
        const std::uint64_t sign_bits =
            (std::bit_cast<std::uint64_t>(sign_prod[c]) ^
             std::bit_cast<std::uint64_t>(in[e])) &
            kSignMask;
        out[e] = std::bit_cast<double>(
            std::bit_cast<std::uint64_t>(factor * mag) ^ sign_bits);
    }
}

}  // namespace

const Ops* avx2_ops() {
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    static const Ops ops{"avx2", scale_clamp_avx2, gather_sub_clamp_avx2,
                         minsum_assemble_avx2};
    return &ops;
}

}  // namespace metldpc::kernels

#else

namespace metldpc::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace metldpc::kernels

#endif
