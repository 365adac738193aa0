#pragma once

#include <cstdint>
#include <utility>

#include "metldpc/channel.hpp"
#include "metldpc/code.hpp"
#include "metldpc/lut.hpp"

namespace metldpc {

enum class DecoderKind { spa, msa, idmsa };

struct SimConfig {
    int max_iterations = 500;
    std::uint64_t max_frames = 1'000'000;
    std::uint64_t target_frame_errors = 50;
    std::uint64_t seed = 1;
    DecoderKind decoder = DecoderKind::spa;
    double msa_factor = 0.75;
    int workers = 1;
};

struct FerResult {
    double esn0_db = 0.0;
    std::uint64_t frames_run = 0;
    std::uint64_t frame_errors = 0;
    double fer = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;  // Wilson 95%
    double avg_iterations = 0.0;
    double lookup_count_avg = 0.0;
};

std::pair<double, double> wilson_interval(std::uint64_t errors,
                                          std::uint64_t trials);

// All-zero-codeword Monte Carlo over BI-AWGN. Stops at the first of
// target_frame_errors or max_frames. Frame i draws its noise from the
// (seed, i) stream and frames are folded in index order, so the result is
// identical for any worker count. A frame counts as an error when the
// decoder output fails a parity check or differs from the transmitted
// all-zero word.
FerResult run_fer(const MetLdpcCode& code, const CompressedLut* lut,
                  const ChannelParams& params, const SimConfig& cfg);

}  // namespace metldpc
