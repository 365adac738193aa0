#pragma once

#include <cstdint>
#include <vector>

#include "metldpc/channel.hpp"
#include "metldpc/protograph.hpp"

namespace metldpc {

// Per-iteration, per-edge-type density of VN->CN messages entering the CN
// update. Gaussian mode stores the mean mu of a consistent N(mu, 2 mu);
// Monte Carlo mode additionally carries saturated-message histograms.
struct EdgeDensitySchedule {
    int iterations = 0;      // T
    int num_edge_types = 0;  // e
    double channel_esn0_db = 0.0;
    double channel_mean = 0.0;  // 2 / sigma^2
    std::vector<double> means;  // T x e, row-major, t and type 1-based in API

    bool has_histograms = false;
    double hist_lo = 0.0, hist_hi = 0.0;
    int hist_bins = 0;
    std::vector<double> hist;  // T x e x bins, each (t, type) row sums to 1

    double mean_at(int t, int type) const {
        return means[static_cast<std::size_t>(t - 1) * num_edge_types +
                     (type - 1)];
    }
    const double* hist_row(int t, int type) const {
        return hist.data() +
               (static_cast<std::size_t>(t - 1) * num_edge_types + (type - 1)) *
                   hist_bins;
    }
};

// Protograph EXIT recursion under the consistent-Gaussian assumption,
// tracked per parallel-edge slot and aggregated per edge type. Punctured
// proto-VNs seed with channel mean 0. Degree-1 proto-CNs emit mean 0,
// matching the decoder convention.
EdgeDensitySchedule pexit_run(const Protograph& proto,
                              const ChannelParams& channel, int iterations);

// Monte Carlo density evolution on the cycle-free ensemble: population
// dynamics per slot with exact box-plus check updates and all-zero-codeword
// channel samples, messages saturated like the decoders. Cross-check oracle
// for pexit_run.
EdgeDensitySchedule mc_density_evolution(const Protograph& proto,
                                         const ChannelParams& channel,
                                         int iterations, int samples,
                                         std::uint64_t seed = 1);

}  // namespace metldpc
