#include "metldpc/lut.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "metldpc/errors.hpp"

namespace metldpc {
namespace {

constexpr char kMagic[8] = {'M', 'E', 'T', 'L', 'D', 'L', 'U', 'T'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = state;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double sq_dist(const double* a, const double* b, int dim) {
    double acc = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

// little-endian scalar IO
template <class T>
void put(std::ostream& out, T value) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw IoError("LUT file truncated");
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

}  // namespace

int CompressedLut::quantize(double beta) const {
    const double x = std::clamp(beta, grid.front(), grid.back());
    const auto it = std::lower_bound(grid.begin(), grid.end(), x);
    if (it == grid.begin()) return 0;
    const int hi = static_cast<int>(it - grid.begin());
    if (hi == q_levels) return q_levels - 1;
    const int lo = hi - 1;
    return (x - grid[lo] <= grid[hi] - x) ? lo : hi;
}

CompressedLut compress_lut(const RawLut& raw, int k, std::uint64_t seed) {
    const int rows = raw.iterations * raw.num_edge_types;
    const int dim = raw.q_levels;
    if (k < 1 || k > rows)
        throw ValidationError("cluster count k must be in 1.." +
                              std::to_string(rows));

    const double* data = raw.values.data();
    std::vector<double> centroids(static_cast<std::size_t>(k) * dim);
    std::uint64_t state = seed ^ 0x6b6d65616e73ull;

    // k-means++ seeding
    std::vector<double> d2(rows, std::numeric_limits<double>::infinity());
    {
        const int first = static_cast<int>(splitmix64(state) % rows);
        std::copy_n(data + static_cast<std::size_t>(first) * dim, dim,
                    centroids.begin());
        for (int c = 1; c < k; ++c) {
            double total = 0.0;
            const double* latest =
                centroids.data() + static_cast<std::size_t>(c - 1) * dim;
            for (int r = 0; r < rows; ++r) {
                d2[r] = std::min(
                    d2[r], sq_dist(data + static_cast<std::size_t>(r) * dim,
                                   latest, dim));
                total += d2[r];
            }
            int chosen = 0;
            if (total > 0.0) {
                const double u =
                    (static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53) *
                    total;
                double acc = 0.0;
                chosen = rows - 1;
                for (int r = 0; r < rows; ++r) {
                    acc += d2[r];
                    if (acc >= u) {
                        chosen = r;
                        break;
                    }
                }
            } else {
                chosen = static_cast<int>(splitmix64(state) % rows);
            }
            std::copy_n(data + static_cast<std::size_t>(chosen) * dim, dim,
                        centroids.begin() + static_cast<std::size_t>(c) * dim);
        }
    }

    std::vector<std::int32_t> assign(rows, 0);
    std::vector<std::int64_t> counts(k, 0);
    std::vector<double> next(static_cast<std::size_t>(k) * dim);
    for (int iter = 0; iter < 200; ++iter) {
        for (int r = 0; r < rows; ++r) {
            const double* p = data + static_cast<std::size_t>(r) * dim;
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (int c = 0; c < k; ++c) {
                const double d =
                    sq_dist(p, centroids.data() + static_cast<std::size_t>(c) * dim,
                            dim);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            assign[r] = best_c;
        }
        std::fill(next.begin(), next.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (int r = 0; r < rows; ++r) {
            const double* p = data + static_cast<std::size_t>(r) * dim;
            double* t = next.data() + static_cast<std::size_t>(assign[r]) * dim;
            for (int i = 0; i < dim; ++i) t[i] += p[i];
            counts[assign[r]]++;
        }
        // Re-seed any empty cluster with the row farthest from its centroid.
        for (int c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            double worst = -1.0;
            int worst_r = 0;
            for (int r = 0; r < rows; ++r) {
                const double d =
                    sq_dist(data + static_cast<std::size_t>(r) * dim,
                            centroids.data() +
                                static_cast<std::size_t>(assign[r]) * dim,
                            dim);
                if (d > worst && counts[assign[r]] > 1) {
                    worst = d;
                    worst_r = r;
                }
            }
            assign[worst_r] = c;
            std::fill(next.begin(), next.end(), 0.0);
            std::fill(counts.begin(), counts.end(), 0);
            for (int r = 0; r < rows; ++r) {
                const double* q = data + static_cast<std::size_t>(r) * dim;
                double* t =
                    next.data() + static_cast<std::size_t>(assign[r]) * dim;
                for (int i = 0; i < dim; ++i) t[i] += q[i];
                counts[assign[r]]++;
            }
        }
        double movement = 0.0;
        for (int c = 0; c < k; ++c) {
            double* t = next.data() + static_cast<std::size_t>(c) * dim;
            for (int i = 0; i < dim; ++i) t[i] /= static_cast<double>(counts[c]);
            movement = std::max(
                movement,
                std::sqrt(sq_dist(
                    t, centroids.data() + static_cast<std::size_t>(c) * dim,
                    dim)));
        }
        centroids.swap(next);
        if (movement < 1e-10) break;
    }

    // final assignment against the converged centroids
    for (int r = 0; r < rows; ++r) {
        const double* p = data + static_cast<std::size_t>(r) * dim;
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (int c = 0; c < k; ++c) {
            const double d = sq_dist(
                p, centroids.data() + static_cast<std::size_t>(c) * dim, dim);
            if (d < best) {
                best = d;
                best_c = c;
            }
        }
        assign[r] = best_c;
    }

    CompressedLut out;
    out.iterations = raw.iterations;
    out.num_edge_types = raw.num_edge_types;
    out.q_levels = raw.q_levels;
    out.clusters = k;
    out.mode = raw.mode;
    out.grid_policy = raw.grid_policy;
    out.channel_esn0_db = raw.channel_esn0_db;
    out.proto_name = raw.proto_name;
    out.grid = raw.grid;
    out.cluster_rows = std::move(centroids);
    out.index_map = std::move(assign);
    double sum_err = 0.0, max_err = 0.0;
    for (int r = 0; r < rows; ++r) {
        const double* p = data + static_cast<std::size_t>(r) * dim;
        const double* c = out.cluster_rows.data() +
                          static_cast<std::size_t>(out.index_map[r]) * dim;
        for (int i = 0; i < dim; ++i) {
            const double err = std::fabs(p[i] - c[i]);
            sum_err += err;
            max_err = std::max(max_err, err);
        }
    }
    out.recon_mean_err = sum_err / (static_cast<double>(rows) * dim);
    out.recon_max_err = max_err;
    // centroids are convex combinations of values in [0,1]; clamp fp dust
    for (double& v : out.cluster_rows) v = std::clamp(v, 0.0, 1.0);
    return out;
}

CompressedLut constant_lut(int iterations, int num_edge_types, int q_levels,
                           double value) {
    CompressedLut out;
    out.iterations = iterations;
    out.num_edge_types = num_edge_types;
    out.q_levels = q_levels;
    out.clusters = 1;
    out.proto_name = "constant";
    out.grid.resize(q_levels);
    for (int q = 0; q < q_levels; ++q) out.grid[q] = q + 1.0;
    out.cluster_rows.assign(q_levels, value);
    out.index_map.assign(
        static_cast<std::size_t>(iterations) * num_edge_types, 0);
    return out;
}

void write_lut(const CompressedLut& lut, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(lut.iterations));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(lut.num_edge_types));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(lut.q_levels));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(lut.clusters));
    put<std::uint8_t>(out, lut.mode == NormalizationMode::normalized ? 0 : 1);
    put<std::uint8_t>(out,
                      lut.grid_policy == GridPolicy::channel_quantile ? 0 : 1);
    put<double>(out, lut.channel_esn0_db);
    put<double>(out, lut.recon_mean_err);
    put<double>(out, lut.recon_max_err);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(lut.proto_name.size()));
    out.write(lut.proto_name.data(),
              static_cast<std::streamsize>(lut.proto_name.size()));
    for (double g : lut.grid) put<double>(out, g);
    for (double v : lut.cluster_rows) put<double>(out, v);
    for (std::int32_t idx : lut.index_map) put<std::int32_t>(out, idx);
    if (!out) throw IoError("write failed: " + path);
}

CompressedLut read_lut(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open LUT file: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError("not a LUT file: " + path);
    const auto version = get<std::uint32_t>(in);
    if (version != kVersion)
        throw IoError("LUT version mismatch: file has " +
                      std::to_string(version) + ", expected " +
                      std::to_string(kVersion));
    CompressedLut lut;
    lut.iterations = static_cast<int>(get<std::uint32_t>(in));
    lut.num_edge_types = static_cast<int>(get<std::uint32_t>(in));
    lut.q_levels = static_cast<int>(get<std::uint32_t>(in));
    lut.clusters = static_cast<int>(get<std::uint32_t>(in));
    constexpr int kDimCap = 50'000'000;
    if (lut.iterations < 1 || lut.num_edge_types < 1 || lut.q_levels < 1 ||
        lut.clusters < 1 ||
        static_cast<long long>(lut.iterations) * lut.num_edge_types > kDimCap ||
        static_cast<long long>(lut.clusters) * lut.q_levels > kDimCap)
        throw IoError("corrupted LUT dimensions");
    lut.mode = get<std::uint8_t>(in) == 0 ? NormalizationMode::normalized
                                          : NormalizationMode::paper_literal;
    lut.grid_policy = get<std::uint8_t>(in) == 0 ? GridPolicy::channel_quantile
                                                 : GridPolicy::uniform;
    lut.channel_esn0_db = get<double>(in);
    lut.recon_mean_err = get<double>(in);
    lut.recon_max_err = get<double>(in);
    const auto name_len = get<std::uint32_t>(in);
    if (name_len > 4096) throw IoError("corrupted LUT name length");
    lut.proto_name.resize(name_len);
    in.read(lut.proto_name.data(), name_len);
    if (!in) throw IoError("LUT file truncated");
    lut.grid.resize(lut.q_levels);
    for (double& g : lut.grid) g = get<double>(in);
    for (int q = 1; q < lut.q_levels; ++q)
        if (!(lut.grid[q] >= lut.grid[q - 1]))
            throw IoError("LUT grid not ascending");
    lut.cluster_rows.resize(static_cast<std::size_t>(lut.clusters) *
                            lut.q_levels);
    for (double& v : lut.cluster_rows) {
        v = get<double>(in);
        if (!(v >= 0.0 && v <= 1.0))
            throw IoError("LUT value outside [0,1]");
    }
    lut.index_map.resize(static_cast<std::size_t>(lut.iterations) *
                         lut.num_edge_types);
    for (std::int32_t& idx : lut.index_map) {
        idx = get<std::int32_t>(in);
        if (idx < 0 || idx >= lut.clusters)
            throw IoError("LUT index map entry out of range");
    }
    return lut;
}

void write_lut_csv(const CompressedLut& lut, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "t,edge_type,q,grid_beta,c\n";
    out.precision(17);
    for (int t = 1; t <= lut.iterations; ++t)
        for (int type = 1; type <= lut.num_edge_types; ++type)
            for (int q = 0; q < lut.q_levels; ++q)
                out << t << "," << type << "," << (q + 1) << "," << lut.grid[q]
                    << "," << lut.value(t, type, q) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace metldpc
