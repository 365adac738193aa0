#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "metldpc/protograph.hpp"

namespace metldpc {

struct CodeEdge {
    std::int32_t cn = 0;
    std::int32_t vn = 0;
    std::int16_t type = 0;
};

// Lifted multi-edge-type code. Immutable once built; decoders and the FER
// harness share one instance across worker threads.
class MetLdpcCode {
  public:
    MetLdpcCode(std::int32_t n, std::int32_t m, std::int32_t z,
                int num_edge_types, std::vector<CodeEdge> edges,
                std::vector<std::uint8_t> punctured, std::string name);

    std::int32_t n() const { return n_; }
    std::int32_t m() const { return m_; }
    std::int32_t z() const { return z_; }
    int num_edge_types() const { return e_; }
    double rate() const { return rate_; }
    const std::string& name() const { return name_; }

    std::int64_t num_edges() const {
        return static_cast<std::int64_t>(vn_of_edge_.size());
    }
    bool punctured(std::int32_t vn) const { return punctured_[vn] != 0; }
    const std::vector<std::uint8_t>& punctured() const { return punctured_; }

    // CN-major CSR; messages are stored in this edge order.
    const std::vector<std::int32_t>& cn_ptr() const { return cn_ptr_; }
    const std::vector<std::int32_t>& vn_of_edge() const { return vn_of_edge_; }
    const std::vector<std::int16_t>& type_of_edge() const {
        return type_of_edge_;
    }
    std::int32_t cn_of_edge(std::int64_t e) const { return cn_of_edge_[e]; }
    const std::vector<std::int32_t>& cn_of_edge() const { return cn_of_edge_; }

    // VN-major view: edge indices (into the CN-major arrays) per VN.
    const std::vector<std::int32_t>& vn_ptr() const { return vn_ptr_; }
    const std::vector<std::int32_t>& vn_edges() const { return vn_edges_; }

    int max_cn_degree() const { return max_cn_degree_; }

    std::vector<CodeEdge> edge_list() const;

  private:
    std::int32_t n_, m_, z_;
    int e_;
    double rate_;
    std::string name_;
    std::vector<std::uint8_t> punctured_;
    std::vector<std::int32_t> cn_ptr_, vn_of_edge_, cn_of_edge_;
    std::vector<std::int16_t> type_of_edge_;
    std::vector<std::int32_t> vn_ptr_, vn_edges_;
    int max_cn_degree_ = 0;
};

struct LiftOptions {
    // Redraw circulant shifts that close a 4-cycle, up to this many passes,
    // then accept the draw.
    int girth_retry_budget = 100;
    bool avoid_4cycles = true;
};

// Quasi-cyclic lift: every parallel-edge slot becomes z edges through a
// seeded circulant shift; parallel slots of one position get distinct shifts.
// Requires z >= max base entry.
MetLdpcCode lift_protograph(const Protograph& proto, std::int32_t z,
                            std::uint64_t seed, const LiftOptions& opts = {});

// True if the current shift assignment closes any length-4 cycle.
bool qc_shifts_have_4cycle(const Protograph& proto,
                           const std::vector<std::int32_t>& shifts,
                           std::int32_t z);

struct CodeStats {
    std::map<int, std::int64_t> vn_degree_histogram;
    std::map<int, std::int64_t> cn_degree_histogram;
    double frac_cns_touching_deg1_vns = 0.0;
};

CodeStats code_stats(const MetLdpcCode& code);

// Export format: one JSON header line, then `cn,vn,edge_type` CSV rows.
void write_code(const MetLdpcCode& code, const std::string& path);
MetLdpcCode load_code(const std::string& path);

}  // namespace metldpc
