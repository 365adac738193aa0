#include "metldpc/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <thread>
#include <unordered_map>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "metldpc/errors.hpp"

namespace metldpc {
namespace {

constexpr double kQuadTol = 1e-9;

double gauss_pdf(double x, double mu, double var) {
    const double d = x - mu;
    return std::exp(-d * d / (2.0 * var)) /
           std::sqrt(2.0 * std::numbers::pi * var);
}

// Both-tails density of |X| for X ~ N(mu, 2 mu), evaluated at x >= 0.
double folded_pdf(double x, double mu) {
    const double var = 2.0 * mu;
    return gauss_pdf(x, mu, var) + gauss_pdf(-x, mu, var);
}

double folded_cdf(double x, double mu) {
    if (x <= 0.0) return 0.0;
    const double sigma = std::sqrt(2.0 * mu);
    return 0.5 * (std::erf((x - mu) / (sigma * std::numbers::sqrt2)) +
                  std::erf((x + mu) / (sigma * std::numbers::sqrt2)));
}

double histogram_tail_factor(const EdgeDensitySchedule& densities, int t,
                             int type, double beta2nd, NormalizationMode mode,
                             bool* tail_clamped) {
    const double* row = densities.hist_row(t, type);
    const double width =
        (densities.hist_hi - densities.hist_lo) / densities.hist_bins;
    double num = 0.0, mass = 0.0;
    for (int b = 0; b < densities.hist_bins; ++b) {
        if (row[b] == 0.0) continue;
        const double lo = densities.hist_lo + b * width;
        const double hi = lo + width;
        const double center = 0.5 * (lo + hi);
        // overlap of [lo, hi] with |x| >= beta2nd
        double frac;
        if (hi <= -beta2nd || lo >= beta2nd) {
            frac = 1.0;
        } else if (lo >= -beta2nd && hi <= beta2nd) {
            frac = 0.0;
        } else {
            double covered = 0.0;
            if (lo < -beta2nd) covered += std::min(hi, -beta2nd) - lo;
            if (hi > beta2nd) covered += hi - std::max(lo, beta2nd);
            frac = covered / width;
        }
        if (frac == 0.0) continue;
        num += frac * row[b] * std::tanh(std::fabs(center) / 2.0);
        mass += frac * row[b];
    }
    if (mode == NormalizationMode::paper_literal) return num;
    if (mass <= 0.0) {
        if (tail_clamped != nullptr) *tail_clamped = true;
        return 1.0;
    }
    return num / mass;
}

}  // namespace

double gaussian_tail_factor(double mu, double beta2nd, NormalizationMode mode,
                            bool* tail_clamped) {
    if (mu < 1e-12) {
        // degenerate density at 0
        if (beta2nd <= 0.0) return 0.0;
        if (mode == NormalizationMode::paper_literal) return 0.0;
        if (tail_clamped != nullptr) *tail_clamped = true;
        return 1.0;
    }
    const double tmax = mu + 10.0 * std::sqrt(2.0 * mu);
    if (beta2nd >= tmax) {
        if (mode == NormalizationMode::paper_literal) return 0.0;
        if (tail_clamped != nullptr) *tail_clamped = true;
        return 1.0;
    }
    const double lo = std::max(beta2nd, 0.0);
    auto num_f = [&](double x) {
        return std::tanh(x / 2.0) * folded_pdf(x, mu);
    };
    auto den_f = [&](double x) { return folded_pdf(x, mu); };
    using quad = boost::math::quadrature::gauss_kronrod<double, 15>;
    const double num = quad::integrate(num_f, lo, tmax, 15, kQuadTol);
    if (mode == NormalizationMode::paper_literal)
        return std::clamp(num, 0.0, 1.0);
    const double den = quad::integrate(den_f, lo, tmax, 15, kQuadTol);
    if (den <= kQuadTol) {
        if (tail_clamped != nullptr) *tail_clamped = true;
        return 1.0;
    }
    return std::clamp(num / den, 0.0, 1.0);
}

double scaling_coefficient(double beta2nd, const std::vector<int>& cn_edge_types,
                           const std::array<int, 3>& excluded,
                           const EdgeDensitySchedule& densities, int t,
                           NormalizationMode mode, bool* tail_clamped) {
    if (t < 1 || t > densities.iterations)
        throw ValidationError("iteration outside the density schedule");
    double c = std::tanh(beta2nd / 2.0);
    for (int pos = 0; pos < static_cast<int>(cn_edge_types.size()); ++pos) {
        if (pos == excluded[0] || pos == excluded[1] || pos == excluded[2])
            continue;
        const int type = cn_edge_types[pos];
        const double factor =
            densities.has_histograms
                ? histogram_tail_factor(densities, t, type, beta2nd, mode,
                                        tail_clamped)
                : gaussian_tail_factor(densities.mean_at(t, type), beta2nd,
                                       mode, tail_clamped);
        c *= factor;
    }
    return std::clamp(c, 0.0, 1.0);
}

std::vector<double> channel_quantile_grid(double channel_mean, int q_levels) {
    std::vector<double> grid(q_levels);
    const double mu = std::max(channel_mean, 1e-9);
    const double hi0 = mu + 12.0 * std::sqrt(2.0 * mu);
    for (int k = 1; k <= q_levels; ++k) {
        const double p = static_cast<double>(k) / (q_levels + 1);
        double lo = 0.0, hi = hi0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (folded_cdf(mid, mu) < p)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-12 * hi0) break;
        }
        grid[k - 1] = 0.5 * (lo + hi);
    }
    return grid;
}

RawLut build_raw_lut(const Protograph& proto,
                     const EdgeDensitySchedule& densities, int iterations,
                     int q_levels, GridPolicy grid_policy,
                     NormalizationMode mode, int workers) {
    if (iterations < 1 || iterations > densities.iterations)
        throw ValidationError("requested iterations exceed the schedule");
    if (proto.num_edge_types() != densities.num_edge_types)
        throw ValidationError("edge-type count mismatch: protograph vs schedule");
    if (q_levels < 1) throw ValidationError("q_levels must be >= 1");

    const int e = proto.num_edge_types();
    RawLut lut;
    lut.iterations = iterations;
    lut.num_edge_types = e;
    lut.q_levels = q_levels;
    lut.mode = mode;
    lut.grid_policy = grid_policy;
    lut.channel_esn0_db = densities.channel_esn0_db;
    lut.proto_name = proto.name();
    if (grid_policy == GridPolicy::channel_quantile) {
        lut.grid = channel_quantile_grid(densities.channel_mean, q_levels);
    } else {
        const double top = densities.channel_mean +
                           4.0 * std::sqrt(2.0 * densities.channel_mean);
        lut.grid.resize(q_levels);
        for (int k = 1; k <= q_levels; ++k)
            lut.grid[k - 1] = top * k / q_levels;
    }
    lut.values.assign(static_cast<std::size_t>(iterations) * e * q_levels, 0.0);

    // Residual type multiset per edge type, resolved on its canonical CN.
    std::vector<std::vector<int>> residual_types(e + 1);
    for (int type = 1; type <= e; ++type) {
        const auto& members = proto.label_slots()[type];
        if (members.empty()) continue;
        const int row = proto.slots()[members.front()].row;
        const auto& row_slots = proto.row_slots()[row];
        std::vector<int> types;
        types.reserve(row_slots.size());
        int own = -1;
        for (int s : row_slots) {
            if (own < 0 && proto.slots()[s].label == type)
                own = static_cast<int>(types.size());
            types.push_back(proto.slots()[s].label);
        }
        // drop i = first slot of this type, then m, m' = two lowest remaining
        std::vector<int> residual;
        int dropped = 0;
        for (int pos = 0; pos < static_cast<int>(types.size()); ++pos) {
            if (pos == own) continue;
            if (dropped < 2) {
                ++dropped;
                continue;
            }
            residual.push_back(types[pos]);
        }
        residual_types[type] = std::move(residual);
    }

    // Distinct (mean, beta) tail factors, evaluated once, in parallel.
    struct Key {
        std::uint64_t mu_bits, beta_bits;
        bool operator==(const Key& o) const {
            return mu_bits == o.mu_bits && beta_bits == o.beta_bits;
        }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return std::hash<std::uint64_t>{}(k.mu_bits * 0x9e3779b97f4a7c15ull ^
                                              k.beta_bits);
        }
    };
    std::unordered_map<Key, double, KeyHash> tail;
    std::vector<Key> keys;
    if (!densities.has_histograms) {
        for (int t = 1; t <= iterations; ++t) {
            for (int type = 1; type <= e; ++type) {
                for (int res : residual_types[type]) {
                    const double mu = densities.mean_at(t, res);
                    for (int q = 0; q < q_levels; ++q) {
                        Key k{std::bit_cast<std::uint64_t>(mu),
                              std::bit_cast<std::uint64_t>(lut.grid[q])};
                        if (tail.emplace(k, 0.0).second) keys.push_back(k);
                    }
                }
            }
        }
        std::vector<double> results(keys.size());
        std::atomic<long> clamp_events{0};
        int nthreads = workers > 0
                           ? workers
                           : static_cast<int>(
                                 std::max(1u, std::thread::hardware_concurrency()));
        nthreads = std::min<int>(nthreads, static_cast<int>(keys.size()) + 1);
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            long local_clamps = 0;
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= keys.size()) break;
                bool clamped = false;
                results[i] = gaussian_tail_factor(
                    std::bit_cast<double>(keys[i].mu_bits),
                    std::bit_cast<double>(keys[i].beta_bits), mode, &clamped);
                if (clamped) ++local_clamps;
            }
            clamp_events += local_clamps;
        };
        std::vector<std::thread> pool;
        for (int i = 1; i < nthreads; ++i) pool.emplace_back(work);
        work();
        for (auto& th : pool) th.join();
        for (std::size_t i = 0; i < keys.size(); ++i) tail[keys[i]] = results[i];
        lut.tail_clamp_events = clamp_events.load();
    }

    for (int t = 1; t <= iterations; ++t) {
        for (int type = 1; type <= e; ++type) {
            double* cell =
                lut.values.data() +
                (static_cast<std::size_t>(t - 1) * e + (type - 1)) * q_levels;
            for (int q = 0; q < q_levels; ++q) {
                double c = std::tanh(lut.grid[q] / 2.0);
                if (densities.has_histograms) {
                    bool clamped = false;
                    for (int res : residual_types[type])
                        c *= histogram_tail_factor(densities, t, res,
                                                   lut.grid[q], mode, &clamped);
                    if (clamped) ++lut.tail_clamp_events;
                } else {
                    for (int res : residual_types[type]) {
                        const double mu = densities.mean_at(t, res);
                        c *= tail.at(Key{std::bit_cast<std::uint64_t>(mu),
                                         std::bit_cast<std::uint64_t>(
                                             lut.grid[q])});
                    }
                }
                cell[q] = std::clamp(c, 0.0, 1.0);
            }
            if (mode == NormalizationMode::normalized) {
                // conditional expectations are nondecreasing in beta; iron out
                // quadrature-level jitter so the stored table is monotone
                for (int q = 1; q < q_levels; ++q)
                    cell[q] = std::max(cell[q], cell[q - 1]);
            }
        }
    }
    return lut;
}

std::vector<double> lut_heatmap(const RawLut& lut) {
    std::vector<double> out(static_cast<std::size_t>(lut.iterations) *
                            lut.num_edge_types);
    for (int t = 1; t <= lut.iterations; ++t) {
        for (int type = 1; type <= lut.num_edge_types; ++type) {
            double acc = 0.0;
            for (int q = 0; q < lut.q_levels; ++q) acc += lut.at(t, type, q);
            out[static_cast<std::size_t>(t - 1) * lut.num_edge_types +
                (type - 1)] = acc / lut.q_levels;
        }
    }
    return out;
}

}  // namespace metldpc
