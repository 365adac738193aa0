#include "metldpc/fer.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <thread>

#include "metldpc/decoder.hpp"
#include "metldpc/errors.hpp"

namespace metldpc {
namespace {

struct FrameOutcome {
    bool error = false;
    int iterations = 0;
    std::uint64_t lookups = 0;
};

}  // namespace

std::pair<double, double> wilson_interval(std::uint64_t errors,
                                          std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;  // 95%
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

FerResult run_fer(const MetLdpcCode& code, const CompressedLut* lut,
                  const ChannelParams& params, const SimConfig& cfg) {
    if (cfg.max_iterations < 1)
        throw ValidationError("max_iterations must be >= 1");
    if (cfg.target_frame_errors < 1)
        throw ValidationError("target_frame_errors must be >= 1");
    if (cfg.max_frames < 1) throw ValidationError("max_frames must be >= 1");
    if (cfg.decoder == DecoderKind::idmsa) {
        if (lut == nullptr)
            throw ValidationError("ID-MSA needs a scaling LUT");
        if (lut->num_edge_types != code.num_edge_types())
            throw ValidationError("LUT edge-type count does not match code");
        if (lut->iterations < cfg.max_iterations)
            throw ValidationError("LUT does not cover max_iterations");
    }

    const int workers = std::max(1, cfg.workers);
    std::vector<std::unique_ptr<Decoder>> decoders;
    std::vector<std::vector<double>> llr(workers,
                                         std::vector<double>(code.n()));
    for (int w = 0; w < workers; ++w)
        decoders.push_back(std::make_unique<Decoder>(code));

    auto run_frame = [&](int worker, std::uint64_t frame) {
        FrameRng rng(cfg.seed, frame);
        auto& buf = llr[worker];
        transmit_all_zero(code, params, rng, buf);
        DecodeResult res;
        switch (cfg.decoder) {
            case DecoderKind::spa:
                res = decoders[worker]->decode_spa(buf, cfg.max_iterations);
                break;
            case DecoderKind::msa:
                res = decoders[worker]->decode_msa(buf, cfg.max_iterations,
                                                   cfg.msa_factor);
                break;
            case DecoderKind::idmsa:
                res = decoders[worker]->decode_idmsa(buf, cfg.max_iterations,
                                                     *lut);
                break;
        }
        bool error = !res.success;
        if (!error) {
            // all-zero was sent: a converged nonzero word is an undetected
            // frame error
            error = std::find(res.hard_decision.begin(),
                              res.hard_decision.end(),
                              std::uint8_t{1}) != res.hard_decision.end();
        }
        return FrameOutcome{error, res.iterations_used, res.lookup_count};
    };

    FerResult out;
    out.esn0_db = params.esn0_db;
    std::uint64_t sum_iters = 0, sum_lookups = 0;
    const std::uint64_t batch =
        std::max<std::uint64_t>(16, static_cast<std::uint64_t>(workers) * 8);
    std::vector<FrameOutcome> outcomes(batch);

    std::uint64_t next_frame = 0;
    bool stop = false;
    while (!stop && next_frame < cfg.max_frames) {
        const std::uint64_t count =
            std::min<std::uint64_t>(batch, cfg.max_frames - next_frame);
        if (workers == 1) {
            for (std::uint64_t i = 0; i < count; ++i)
                outcomes[i] = run_frame(0, next_frame + i);
        } else {
            std::vector<std::thread> pool;
            const std::uint64_t chunk = (count + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                const std::uint64_t lo = std::min<std::uint64_t>(w * chunk, count);
                const std::uint64_t hi =
                    std::min<std::uint64_t>(lo + chunk, count);
                if (lo >= hi) break;
                pool.emplace_back([&, w, lo, hi] {
                    for (std::uint64_t i = lo; i < hi; ++i)
                        outcomes[i] = run_frame(w, next_frame + i);
                });
            }
            for (auto& th : pool) th.join();
        }
        // Fold in frame order; the stopping frame is worker-independent.
        for (std::uint64_t i = 0; i < count; ++i) {
            const FrameOutcome& oc = outcomes[i];
            out.frames_run++;
            sum_iters += static_cast<std::uint64_t>(oc.iterations);
            sum_lookups += oc.lookups;
            if (oc.error) {
                out.frame_errors++;
                if (out.frame_errors >= cfg.target_frame_errors) {
                    stop = true;
                    break;
                }
            }
        }
        next_frame += count;
    }

    out.fer = static_cast<double>(out.frame_errors) /
              static_cast<double>(out.frames_run);
    std::tie(out.ci_lo, out.ci_hi) =
        wilson_interval(out.frame_errors, out.frames_run);
    out.avg_iterations = static_cast<double>(sum_iters) /
                         static_cast<double>(out.frames_run);
    out.lookup_count_avg = static_cast<double>(sum_lookups) /
                           static_cast<double>(out.frames_run);
    return out;
}

}  // namespace metldpc
