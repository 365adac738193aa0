#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metldpc/scaling.hpp"

namespace metldpc {

// K-means-compressed scaling table: each (t, edge type) cell points at one of
// K shared grid rows. Storage is K x Q scalars plus the T x e index map.
struct CompressedLut {
    int iterations = 0;      // T
    int num_edge_types = 0;  // e
    int q_levels = 0;        // Q
    int clusters = 0;        // K
    NormalizationMode mode = NormalizationMode::normalized;
    GridPolicy grid_policy = GridPolicy::channel_quantile;
    double channel_esn0_db = 0.0;
    std::string proto_name;
    std::vector<double> grid;          // Q, ascending
    std::vector<double> cluster_rows;  // K x Q
    std::vector<std::int32_t> index_map;  // T x e, values in [0, K)
    double recon_mean_err = 0.0;
    double recon_max_err = 0.0;

    int entry_count() const { return clusters * q_levels; }

    const double* row_for(int t, int type) const {
        const std::int32_t k =
            index_map[static_cast<std::size_t>(t - 1) * num_edge_types +
                      (type - 1)];
        return cluster_rows.data() + static_cast<std::size_t>(k) * q_levels;
    }
    double value(int t, int type, int q) const { return row_for(t, type)[q]; }

    // Nearest grid point after clamping to the grid range; exact midpoints
    // resolve to the lower index.
    int quantize(double beta) const;
};

// Seeded k-means++ / Lloyd over the T x e rows of the raw tensor.
// Throws when k exceeds the row count.
CompressedLut compress_lut(const RawLut& raw, int k, std::uint64_t seed = 1);

// All-cells-constant table (identity scaling when value = 1).
CompressedLut constant_lut(int iterations, int num_edge_types, int q_levels,
                           double value);

void write_lut(const CompressedLut& lut, const std::string& path);
CompressedLut read_lut(const std::string& path);

// Human-readable dump: t,edge_type,q,grid_beta,c rows.
void write_lut_csv(const CompressedLut& lut, const std::string& path);

}  // namespace metldpc
