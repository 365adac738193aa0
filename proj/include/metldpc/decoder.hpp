#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "metldpc/code.hpp"
#include "metldpc/lut.hpp"

namespace metldpc {

struct DecodeResult {
    bool success = false;  // syndrome satisfied
    int iterations_used = 0;
    std::vector<std::uint8_t> hard_decision;
    std::uint64_t lookup_count = 0;  // scaling-table fetches (ID-MSA only)
};

bool syndrome_ok(const MetLdpcCode& code, std::span<const std::uint8_t> hard);

// Flooding-schedule belief-propagation decoders over the edge-typed graph.
// One instance per worker; the bound code (and any LUT) stay shared and
// immutable. Messages saturate at +-38. Degree-1 checks emit 0; degree-2
// checks pass the other input through (unscaled for ID-MSA).
class Decoder {
  public:
    explicit Decoder(const MetLdpcCode& code);

    DecodeResult decode_spa(std::span<const double> llr_in, int max_iters);
    DecodeResult decode_msa(std::span<const double> llr_in, int max_iters,
                            double factor);
    // One table fetch per output message of every check of degree >= 3,
    // indexed by (iteration, output edge type, quantized second-smallest
    // input magnitude).
    DecodeResult decode_idmsa(std::span<const double> llr_in, int max_iters,
                              const CompressedLut& lut);

    // Test/trace hook, called once per iteration after the posterior update.
    using IterationObserver =
        std::function<void(int iter, std::span<const double> vn_to_cn,
                           std::span<const double> cn_to_vn,
                           std::span<const double> posterior)>;
    void set_observer(IterationObserver observer) {
        observer_ = std::move(observer);
    }

  private:
    template <class CnUpdate>
    DecodeResult run(std::span<const double> llr_in, int max_iters,
                     CnUpdate&& cn_update);

    void cn_pass_spa();
    void cn_pass_minsum_stats();

    const MetLdpcCode& code_;
    std::vector<double> channel_, posterior_, vn_to_cn_, cn_to_vn_;
    std::vector<std::uint8_t> hard_;
    std::vector<double> min1_, min2_, sign_prod_, fwd_, bwd_;
    std::vector<std::int32_t> argmin_;
    std::uint64_t lookups_ = 0;
    IterationObserver observer_;
};

DecodeResult spa_decode(const MetLdpcCode& code, std::span<const double> llr_in,
                        int max_iters);
DecodeResult msa_decode(const MetLdpcCode& code, std::span<const double> llr_in,
                        int max_iters, double factor);
DecodeResult id_msa_decode(const MetLdpcCode& code,
                           std::span<const double> llr_in, int max_iters,
                           const CompressedLut& lut);

}  // namespace metldpc
