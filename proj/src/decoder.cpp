#include "metldpc/decoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "metldpc/errors.hpp"
#include "metldpc/kernels.hpp"
#include "metldpc/llr.hpp"

namespace metldpc {
namespace {

constexpr std::uint64_t kSignMask = 0x8000000000000000ull;

inline double signed_by(double mag, double sign_carrier_a,
                        double sign_carrier_b) {
    const std::uint64_t bits =
        (std::bit_cast<std::uint64_t>(sign_carrier_a) ^
         std::bit_cast<std::uint64_t>(sign_carrier_b)) &
        kSignMask;
    return std::bit_cast<double>(std::bit_cast<std::uint64_t>(mag) ^ bits);
}

}  // namespace

bool syndrome_ok(const MetLdpcCode& code, std::span<const std::uint8_t> hard) {
    const auto& cn_ptr = code.cn_ptr();
    const auto& vn_of = code.vn_of_edge();
    for (std::int32_t c = 0; c < code.m(); ++c) {
        std::uint8_t parity = 0;
        for (std::int32_t e = cn_ptr[c]; e < cn_ptr[c + 1]; ++e)
            parity ^= hard[vn_of[e]];
        if (parity != 0) return false;
    }
    return true;
}

Decoder::Decoder(const MetLdpcCode& code) : code_(code) {
    const auto ne = static_cast<std::size_t>(code.num_edges());
    channel_.resize(code.n());
    posterior_.resize(code.n());
    vn_to_cn_.resize(ne);
    cn_to_vn_.resize(ne);
    hard_.resize(code.n());
    min1_.resize(code.m());
    min2_.resize(code.m());
    sign_prod_.resize(code.m());
    argmin_.resize(code.m());
    fwd_.resize(code.max_cn_degree());
    bwd_.resize(code.max_cn_degree());
}

void Decoder::cn_pass_spa() {
    const auto& cn_ptr = code_.cn_ptr();
    for (std::int32_t c = 0; c < code_.m(); ++c) {
        const std::int32_t lo = cn_ptr[c];
        const std::int32_t d = cn_ptr[c + 1] - lo;
        if (d == 0) continue;
        if (d == 1) {
            cn_to_vn_[lo] = 0.0;
            continue;
        }
        fwd_[0] = vn_to_cn_[lo];
        bwd_[d - 1] = vn_to_cn_[lo + d - 1];
        for (std::int32_t j = 1; j < d; ++j) {
            fwd_[j] = box_plus(fwd_[j - 1], vn_to_cn_[lo + j]);
            bwd_[d - 1 - j] = box_plus(bwd_[d - j], vn_to_cn_[lo + d - 1 - j]);
        }
        cn_to_vn_[lo] = bwd_[1];
        cn_to_vn_[lo + d - 1] = fwd_[d - 2];
        for (std::int32_t j = 1; j < d - 1; ++j)
            cn_to_vn_[lo + j] = box_plus(fwd_[j - 1], bwd_[j + 1]);
    }
}

// min1/min2/argmin-edge/sign-product per check, scanned in edge order so
// ties resolve to the lowest edge index.
void Decoder::cn_pass_minsum_stats() {
    const auto& cn_ptr = code_.cn_ptr();
    for (std::int32_t c = 0; c < code_.m(); ++c) {
        const std::int32_t lo = cn_ptr[c];
        const std::int32_t hi = cn_ptr[c + 1];
        double m1 = 0.0, m2 = 0.0, sign = 1.0;
        std::int32_t am = lo;
        if (hi - lo >= 2) {
            m1 = m2 = std::numeric_limits<double>::infinity();
            for (std::int32_t e = lo; e < hi; ++e) {
                const double v = vn_to_cn_[e];
                const double b = std::fabs(v);
                if (v < 0.0) sign = -sign;
                if (b < m1) {
                    m2 = m1;
                    m1 = b;
                    am = e;
                } else if (b < m2) {
                    m2 = b;
                }
            }
        }
        min1_[c] = m1;
        min2_[c] = m2;
        sign_prod_[c] = sign;
        argmin_[c] = am;
    }
}

template <class CnUpdate>
DecodeResult Decoder::run(std::span<const double> llr_in, int max_iters,
                          CnUpdate&& cn_update) {
    if (static_cast<std::int64_t>(llr_in.size()) != code_.n())
        throw ValidationError("llr vector length != code length");
    if (max_iters < 1) throw ValidationError("max_iters must be >= 1");

    const auto& k = kernels::active();
    const auto ne = static_cast<std::size_t>(code_.num_edges());
    k.scale_clamp(llr_in.data(), channel_.size(), 1.0, kLlrSaturation,
                  channel_.data());
    posterior_ = channel_;
    std::fill(cn_to_vn_.begin(), cn_to_vn_.end(), 0.0);
    lookups_ = 0;

    DecodeResult result;
    for (int t = 1; t <= max_iters; ++t) {
        k.gather_sub_clamp(posterior_.data(), code_.vn_of_edge().data(),
                           cn_to_vn_.data(), ne, kLlrSaturation,
                           vn_to_cn_.data());
        cn_update(t);

        const auto& vn_ptr = code_.vn_ptr();
        const auto& vn_edges = code_.vn_edges();
        for (std::int32_t v = 0; v < code_.n(); ++v) {
            double acc = channel_[v];
            for (std::int32_t j = vn_ptr[v]; j < vn_ptr[v + 1]; ++j)
                acc += cn_to_vn_[vn_edges[j]];
            posterior_[v] = acc;
            hard_[v] = acc < 0.0 ? 1 : 0;
        }

        result.iterations_used = t;
        if (observer_) observer_(t, vn_to_cn_, cn_to_vn_, posterior_);
        if (syndrome_ok(code_, hard_)) {
            result.success = true;
            break;
        }
    }
    result.hard_decision = hard_;
    result.lookup_count = lookups_;
    return result;
}

DecodeResult Decoder::decode_spa(std::span<const double> llr_in,
                                 int max_iters) {
    return run(llr_in, max_iters, [this](int) { cn_pass_spa(); });
}

DecodeResult Decoder::decode_msa(std::span<const double> llr_in, int max_iters,
                                 double factor) {
    if (!(factor > 0.0 && factor <= 1.0))
        throw ValidationError("min-sum factor must be in (0, 1]");
    const auto& k = kernels::active();
    return run(llr_in, max_iters, [&, factor](int) {
        cn_pass_minsum_stats();
        k.minsum_assemble(vn_to_cn_.data(), code_.cn_of_edge().data(),
                          min1_.data(), min2_.data(), argmin_.data(),
                          sign_prod_.data(), factor,
                          static_cast<std::size_t>(code_.num_edges()),
                          cn_to_vn_.data());
    });
}

DecodeResult Decoder::decode_idmsa(std::span<const double> llr_in,
                                   int max_iters, const CompressedLut& lut) {
    if (lut.num_edge_types != code_.num_edge_types())
        throw ValidationError(
            "LUT edge-type count " + std::to_string(lut.num_edge_types) +
            " does not match code (" + std::to_string(code_.num_edge_types()) +
            ")");
    if (lut.iterations < max_iters)
        throw ValidationError("LUT covers " + std::to_string(lut.iterations) +
                              " iterations, decode wants " +
                              std::to_string(max_iters));

    std::vector<const double*> type_rows(code_.num_edge_types() + 1, nullptr);
    const auto& cn_ptr = code_.cn_ptr();
    const auto& types = code_.type_of_edge();

    return run(llr_in, max_iters, [&](int t) {
        for (int ty = 1; ty <= code_.num_edge_types(); ++ty)
            type_rows[ty] = lut.row_for(t, ty);
        for (std::int32_t c = 0; c < code_.m(); ++c) {
            const std::int32_t lo = cn_ptr[c];
            const std::int32_t hi = cn_ptr[c + 1];
            const std::int32_t d = hi - lo;
            if (d == 0) continue;
            if (d == 1) {
                cn_to_vn_[lo] = 0.0;
                continue;
            }
            if (d == 2) {
                // second minimum undefined: empty scaling, pass-through
                const double a = vn_to_cn_[lo];
                const double b = vn_to_cn_[lo + 1];
                cn_to_vn_[lo] = b;
                cn_to_vn_[lo + 1] = a;
                continue;
            }
            double m1 = std::numeric_limits<double>::infinity(), m2 = m1,
                   m3 = m1;
            std::int32_t e1 = lo, e2 = lo;
            double sign = 1.0;
            for (std::int32_t e = lo; e < hi; ++e) {
                const double v = vn_to_cn_[e];
                const double b = std::fabs(v);
                if (v < 0.0) sign = -sign;
                if (b < m1) {
                    m3 = m2;
                    m2 = m1;
                    e2 = e1;
                    m1 = b;
                    e1 = e;
                } else if (b < m2) {
                    m3 = m2;
                    m2 = b;
                    e2 = e;
                } else if (b < m3) {
                    m3 = b;
                }
            }
            for (std::int32_t e = lo; e < hi; ++e) {
                double mag, beta2nd;
                if (e == e1) {
                    mag = m2;
                    beta2nd = m3;
                } else if (e == e2) {
                    mag = m1;
                    beta2nd = m3;
                } else {
                    mag = m1;
                    beta2nd = m2;
                }
                const double* row = type_rows[types[e]];
                const double c_scale = row[lut.quantize(beta2nd)];
                ++lookups_;
                cn_to_vn_[e] = signed_by(mag * c_scale, sign, vn_to_cn_[e]);
            }
        }
    });
}

DecodeResult spa_decode(const MetLdpcCode& code, std::span<const double> llr_in,
                        int max_iters) {
    Decoder dec(code);
    return dec.decode_spa(llr_in, max_iters);
}

DecodeResult msa_decode(const MetLdpcCode& code, std::span<const double> llr_in,
                        int max_iters, double factor) {
    Decoder dec(code);
    return dec.decode_msa(llr_in, max_iters, factor);
}

DecodeResult id_msa_decode(const MetLdpcCode& code,
                           std::span<const double> llr_in, int max_iters,
                           const CompressedLut& lut) {
    Decoder dec(code);
    return dec.decode_idmsa(llr_in, max_iters, lut);
}

}  // namespace metldpc
