#include "metldpc/density.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "metldpc/errors.hpp"
#include "metldpc/jfunction.hpp"
#include "metldpc/llr.hpp"

namespace metldpc {
namespace {

// The recursion evaluates J at the same arguments over and over once types
// saturate; memoizing on the exact bit pattern keeps long schedules cheap.
double j_cached(double mu) {
    static thread_local std::unordered_map<std::uint64_t, double> cache;
    const auto key = std::bit_cast<std::uint64_t>(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const double v = j_function(mu);
    cache.emplace(key, v);
    return v;
}

double j_inverse_cached(double mi) {
    static thread_local std::unordered_map<std::uint64_t, double> cache;
    const auto key = std::bit_cast<std::uint64_t>(mi);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const double v = j_inverse(mi);
    cache.emplace(key, v);
    return v;
}

}  // namespace

EdgeDensitySchedule pexit_run(const Protograph& proto,
                              const ChannelParams& channel, int iterations) {
    if (iterations < 1) throw ValidationError("pexit iterations must be >= 1");
    const auto& slots = proto.slots();
    const int num_slots = static_cast<int>(slots.size());
    const int e = proto.num_edge_types();

    EdgeDensitySchedule sched;
    sched.iterations = iterations;
    sched.num_edge_types = e;
    sched.channel_esn0_db = channel.esn0_db;
    sched.channel_mean = 2.0 / channel.sigma2;
    sched.means.assign(static_cast<std::size_t>(iterations) * e, 0.0);

    std::vector<double> mu_c(num_slots, 0.0);  // CN->VN means
    std::vector<double> mu_v(num_slots, 0.0);  // VN->CN means
    std::vector<double> dual(num_slots, 0.0);

    for (int t = 1; t <= iterations; ++t) {
        // VN update: means of independent LLR summands add.
        for (int s = 0; s < num_slots; ++s) {
            const int col = slots[s].col;
            double sum = proto.punctured(col) ? 0.0 : sched.channel_mean;
            for (int sib : proto.col_slots()[col]) sum += mu_c[sib];
            sum -= mu_c[s];
            mu_v[s] = std::clamp(sum, 0.0, kMaxDensityMean);
        }

        for (int type = 1; type <= e; ++type) {
            const auto& members = proto.label_slots()[type];
            double acc = 0.0;
            for (int s : members) acc += mu_v[s];
            sched.means[static_cast<std::size_t>(t - 1) * e + (type - 1)] =
                members.empty() ? 0.0 : acc / members.size();
        }

        // CN update via the EXIT duality: work on 1 - I in the dual mean.
        for (int s = 0; s < num_slots; ++s)
            dual[s] = j_inverse_cached(1.0 - j_cached(mu_v[s]));
        for (int s = 0; s < num_slots; ++s) {
            const auto& row = proto.row_slots()[slots[s].row];
            if (row.size() <= 1) {
                mu_c[s] = 0.0;  // degree-1 check, decoder convention
                continue;
            }
            double sum = 0.0;
            for (int sib : row) sum += dual[sib];
            sum -= dual[s];
            const double mi = 1.0 - j_cached(std::min(sum, kMaxDensityMean));
            mu_c[s] = j_inverse_cached(std::clamp(mi, 0.0, 1.0));
        }
    }
    return sched;
}

EdgeDensitySchedule mc_density_evolution(const Protograph& proto,
                                         const ChannelParams& channel,
                                         int iterations, int samples,
                                         std::uint64_t seed) {
    if (iterations < 1) throw ValidationError("iterations must be >= 1");
    if (samples < 10000)
        throw ValidationError("mc_density_evolution needs >= 1e4 samples");
    const auto& slots = proto.slots();
    const int num_slots = static_cast<int>(slots.size());
    const int e = proto.num_edge_types();
    const double mu_ch = 2.0 / channel.sigma2;
    const double sigma_ch = std::sqrt(2.0 * mu_ch);

    EdgeDensitySchedule sched;
    sched.iterations = iterations;
    sched.num_edge_types = e;
    sched.channel_esn0_db = channel.esn0_db;
    sched.channel_mean = mu_ch;
    sched.means.assign(static_cast<std::size_t>(iterations) * e, 0.0);
    sched.has_histograms = true;
    sched.hist_lo = -(kLlrSaturation + 2.0);
    sched.hist_hi = kLlrSaturation + 2.0;
    sched.hist_bins = 801;
    sched.hist.assign(
        static_cast<std::size_t>(iterations) * e * sched.hist_bins, 0.0);

    FrameRng rng(seed, 0x4d43'4445ull);
    auto pick = [&](int limit) {
        return static_cast<int>(rng.u64() % static_cast<std::uint64_t>(limit));
    };

    std::vector<std::vector<double>> pop_c(num_slots),
        pop_v(num_slots, std::vector<double>(samples, 0.0));
    for (auto& p : pop_c) p.assign(samples, 0.0);

    const double bin_width = (sched.hist_hi - sched.hist_lo) / sched.hist_bins;

    for (int t = 1; t <= iterations; ++t) {
        for (int s = 0; s < num_slots; ++s) {
            const int col = slots[s].col;
            const bool punct = proto.punctured(col);
            const auto& sibs = proto.col_slots()[col];
            for (int k = 0; k < samples; ++k) {
                double sum =
                    punct ? 0.0 : mu_ch + sigma_ch * rng.normal();
                for (int sib : sibs) {
                    if (sib == s) continue;
                    sum += pop_c[sib][pick(samples)];
                }
                pop_v[s][k] = saturate_llr(sum);
            }
        }

        for (int type = 1; type <= e; ++type) {
            const auto& members = proto.label_slots()[type];
            if (members.empty()) continue;
            double acc = 0.0;
            double* row =
                sched.hist.data() +
                (static_cast<std::size_t>(t - 1) * e + (type - 1)) *
                    sched.hist_bins;
            const double w = 1.0 / (static_cast<double>(samples) *
                                    static_cast<double>(members.size()));
            for (int s : members) {
                for (int k = 0; k < samples; ++k) {
                    const double x = pop_v[s][k];
                    acc += x;
                    int bin = static_cast<int>((x - sched.hist_lo) / bin_width);
                    bin = std::clamp(bin, 0, sched.hist_bins - 1);
                    row[bin] += w;
                }
            }
            sched.means[static_cast<std::size_t>(t - 1) * e + (type - 1)] =
                acc / (static_cast<double>(samples) *
                       static_cast<double>(members.size()));
        }

        for (int s = 0; s < num_slots; ++s) {
            const auto& row = proto.row_slots()[slots[s].row];
            for (int k = 0; k < samples; ++k) {
                double acc = 0.0;
                bool first = true;
                for (int sib : row) {
                    if (sib == s) continue;
                    const double x = pop_v[sib][pick(samples)];
                    acc = first ? x : box_plus(acc, x);
                    first = false;
                }
                pop_c[s][k] = first ? 0.0 : acc;
            }
        }
    }
    return sched;
}

}  // namespace metldpc
