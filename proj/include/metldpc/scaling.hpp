#pragma once

#include <array>
#include <string>
#include <vector>

#include "metldpc/density.hpp"
#include "metldpc/protograph.hpp"

namespace metldpc {

// The conditional-expectation scaling term divides by the tail mass in
// normalized mode; paper_literal keeps the bare tail integral.
enum class NormalizationMode { normalized, paper_literal };

enum class GridPolicy { channel_quantile, uniform };

// Iteration-dependent scaling coefficient
//   c = tanh(beta2nd / 2) * prod_{l in residual} T_l,
// where the residual set is the check's edge-type multiset minus the three
// excluded positions {i, m, m'} and
//   T_l = integral over |x| >= beta2nd of tanh(|x|/2) f_l^t(x) dx,
// divided by the tail mass in normalized mode. Integrals run to
// mu + 10 sqrt(2 mu) at absolute tolerance 1e-9. A zero-mass tail in
// normalized mode clamps T_l to 1 and sets *tail_clamped.
double scaling_coefficient(double beta2nd, const std::vector<int>& cn_edge_types,
                           const std::array<int, 3>& excluded,
                           const EdgeDensitySchedule& densities, int t,
                           NormalizationMode mode, bool* tail_clamped = nullptr);

// Tail factor T_l for one consistent-Gaussian density of mean mu.
double gaussian_tail_factor(double mu, double beta2nd, NormalizationMode mode,
                            bool* tail_clamped = nullptr);

// Q points placed at the k/(Q+1) quantiles of the channel-LLR magnitude
// (folded N(mu_ch, 2 mu_ch)).
std::vector<double> channel_quantile_grid(double channel_mean, int q_levels);

struct RawLut {
    int iterations = 0;      // T
    int num_edge_types = 0;  // e
    int q_levels = 0;        // Q
    NormalizationMode mode = NormalizationMode::normalized;
    GridPolicy grid_policy = GridPolicy::channel_quantile;
    double channel_esn0_db = 0.0;
    std::string proto_name;
    std::vector<double> grid;    // Q, ascending
    std::vector<double> values;  // T x e x Q
    long tail_clamp_events = 0;

    double at(int t, int type, int q) const {
        return values[(static_cast<std::size_t>(t - 1) * num_edge_types +
                       (type - 1)) *
                          q_levels +
                      q];
    }
};

// Evaluates the scaling coefficient on the full (t, type, grid) tensor.
// Each edge type's excluded trio {i, m, m'} is resolved on its canonical
// proto-CN: the lowest-index row carrying the type; i is that row's first
// slot of the type and m, m' the two lowest remaining slots.
RawLut build_raw_lut(const Protograph& proto,
                     const EdgeDensitySchedule& densities, int iterations,
                     int q_levels = 32,
                     GridPolicy grid_policy = GridPolicy::channel_quantile,
                     NormalizationMode mode = NormalizationMode::normalized,
                     int workers = 0);

// Fig-style per-(t, type) summary: mean of c over the grid.
std::vector<double> lut_heatmap(const RawLut& lut);

}  // namespace metldpc
