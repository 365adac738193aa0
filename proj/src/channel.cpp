#include "metldpc/channel.hpp"

#include <cmath>
#include <numbers>

#include "metldpc/errors.hpp"

namespace metldpc {
namespace {

std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

double esn0_to_sigma2(double esn0_db) {
    return 1.0 / (2.0 * std::pow(10.0, esn0_db / 10.0));
}

FrameRng::FrameRng(std::uint64_t seed, std::uint64_t frame)
    : engine_(mix64(seed + 0x9e3779b97f4a7c15ull * (frame + 1))) {}

double FrameRng::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double FrameRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

void transmit_all_zero(const MetLdpcCode& code, const ChannelParams& params,
                       FrameRng& rng, std::span<double> llr_out) {
    if (static_cast<std::int64_t>(llr_out.size()) != code.n())
        throw ValidationError("llr buffer length != n");
    if (!(params.sigma2 > 0.0))
        throw ValidationError("channel sigma2 must be positive");
    const double sigma = std::sqrt(params.sigma2);
    const double scale = 2.0 / params.sigma2;
    for (std::int32_t v = 0; v < code.n(); ++v) {
        if (code.punctured(v)) {
            llr_out[v] = 0.0;
        } else {
            llr_out[v] = scale * (1.0 + sigma * rng.normal());
        }
    }
}

}  // namespace metldpc
