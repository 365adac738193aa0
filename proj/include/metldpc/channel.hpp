#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "metldpc/code.hpp"

namespace metldpc {

// Unit-energy BPSK over AWGN with noise power sigma^2 = N0/2.
double esn0_to_sigma2(double esn0_db);

struct ChannelParams {
    double esn0_db = 0.0;
    double sigma2 = 0.5;

    static ChannelParams from_esn0_db(double db) {
        return {db, esn0_to_sigma2(db)};
    }
};

// Deterministic per-frame random stream: the (seed, frame) pair fully
// determines the sequence, so Monte Carlo results are independent of how
// frames are distributed over workers. Normals come from an explicit
// Box-Muller transform to keep the mapping engine-defined only.
class FrameRng {
  public:
    FrameRng(std::uint64_t seed, std::uint64_t frame);

    double normal();
    std::uint64_t u64() { return engine_(); }
    // uniform in (0, 1)
    double uniform();

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// All-zero-codeword transmission: for every non-punctured bit,
// y = +1 + n with n ~ N(0, sigma^2) and llr = 2 y / sigma^2 (positive favors
// bit 0); punctured bits get llr = 0 exactly.
void transmit_all_zero(const MetLdpcCode& code, const ChannelParams& params,
                       FrameRng& rng, std::span<double> llr_out);

}  // namespace metldpc
