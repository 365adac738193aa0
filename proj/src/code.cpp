#include "metldpc/code.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "metldpc/errors.hpp"

namespace metldpc {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = state;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

MetLdpcCode::MetLdpcCode(std::int32_t n, std::int32_t m, std::int32_t z,
                         int num_edge_types, std::vector<CodeEdge> edges,
                         std::vector<std::uint8_t> punctured, std::string name)
    : n_(n), m_(m), z_(z), e_(num_edge_types), name_(std::move(name)),
      punctured_(std::move(punctured)) {
    if (n <= 0 || m <= 0) throw ValidationError("code dimensions must be positive");
    if (static_cast<std::int32_t>(punctured_.size()) != n)
        throw ValidationError("puncture flag vector length != n");
    rate_ = static_cast<double>(n_ - m_) / static_cast<double>(n_);

    std::sort(edges.begin(), edges.end(), [](const CodeEdge& a, const CodeEdge& b) {
        return std::tie(a.cn, a.vn, a.type) < std::tie(b.cn, b.vn, b.type);
    });

    const std::int64_t ne = static_cast<std::int64_t>(edges.size());
    cn_ptr_.assign(m_ + 1, 0);
    vn_of_edge_.resize(ne);
    cn_of_edge_.resize(ne);
    type_of_edge_.resize(ne);
    for (std::int64_t i = 0; i < ne; ++i) {
        const CodeEdge& ed = edges[i];
        if (ed.cn < 0 || ed.cn >= m_ || ed.vn < 0 || ed.vn >= n_)
            throw ValidationError("edge endpoint out of range");
        if (ed.type < 1 || ed.type > e_)
            throw ValidationError("edge type out of range");
        cn_ptr_[ed.cn + 1]++;
        vn_of_edge_[i] = ed.vn;
        cn_of_edge_[i] = ed.cn;
        type_of_edge_[i] = ed.type;
    }
    std::partial_sum(cn_ptr_.begin(), cn_ptr_.end(), cn_ptr_.begin());
    for (std::int32_t c = 0; c < m_; ++c)
        max_cn_degree_ = std::max(max_cn_degree_, cn_ptr_[c + 1] - cn_ptr_[c]);

    vn_ptr_.assign(n_ + 1, 0);
    for (std::int64_t i = 0; i < ne; ++i) vn_ptr_[vn_of_edge_[i] + 1]++;
    std::partial_sum(vn_ptr_.begin(), vn_ptr_.end(), vn_ptr_.begin());
    vn_edges_.resize(ne);
    std::vector<std::int32_t> fill(vn_ptr_.begin(), vn_ptr_.end() - 1);
    for (std::int64_t i = 0; i < ne; ++i)
        vn_edges_[fill[vn_of_edge_[i]]++] = static_cast<std::int32_t>(i);
}

std::vector<CodeEdge> MetLdpcCode::edge_list() const {
    std::vector<CodeEdge> out(vn_of_edge_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = {cn_of_edge_[i], vn_of_edge_[i], type_of_edge_[i]};
    return out;
}

bool qc_shifts_have_4cycle(const Protograph& proto,
                           const std::vector<std::int32_t>& shifts,
                           std::int32_t z) {
    // A lifted 4-cycle exists iff two distinct ordered slot pairs sharing a
    // row agree on (col_a, col_b, shift_a - shift_b mod z).
    std::set<std::tuple<int, int, std::int32_t>> seen;
    const auto& slots = proto.slots();
    for (const auto& row : proto.row_slots()) {
        for (int a : row) {
            for (int b : row) {
                if (a == b) continue;
                const std::int32_t delta =
                    ((shifts[a] - shifts[b]) % z + z) % z;
                if (!seen.insert({slots[a].col, slots[b].col, delta}).second)
                    return true;
            }
        }
    }
    return false;
}

namespace {

// Offending slots of the first detected 4-cycle key collisions.
std::vector<int> find_4cycle_slots(const Protograph& proto,
                                   const std::vector<std::int32_t>& shifts,
                                   std::int32_t z) {
    std::map<std::tuple<int, int, std::int32_t>, std::pair<int, int>> seen;
    std::vector<int> offenders;
    const auto& slots = proto.slots();
    for (const auto& row : proto.row_slots()) {
        for (int a : row) {
            for (int b : row) {
                if (a == b) continue;
                const std::int32_t delta =
                    ((shifts[a] - shifts[b]) % z + z) % z;
                auto key = std::make_tuple(slots[a].col, slots[b].col, delta);
                auto [it, inserted] = seen.emplace(key, std::make_pair(a, b));
                if (!inserted) {
                    offenders.push_back(a);
                    offenders.push_back(b);
                }
            }
        }
    }
    std::sort(offenders.begin(), offenders.end());
    offenders.erase(std::unique(offenders.begin(), offenders.end()),
                    offenders.end());
    return offenders;
}

}  // namespace

MetLdpcCode lift_protograph(const Protograph& proto, std::int32_t z,
                            std::uint64_t seed, const LiftOptions& opts) {
    if (z <= 0) throw ValidationError("lifting factor z must be positive");
    int max_entry = 0;
    for (const auto& row : proto.base())
        for (int v : row) max_entry = std::max(max_entry, v);
    if (z < max_entry)
        throw ValidationError(
            "lifting factor z=" + std::to_string(z) +
            " below max base entry " + std::to_string(max_entry) +
            "; parallel edges need distinct circulant shifts");

    const auto& slots = proto.slots();
    std::uint64_t state = seed ^ 0x6d6574206c647063ull;
    auto draw = [&] { return static_cast<std::int32_t>(splitmix64(state) % z); };

    // Distinct shifts among parallel slots of a position; -1 marks undrawn.
    std::vector<std::int32_t> shifts(slots.size(), -1);
    auto redraw_slot = [&](int i) {
        for (;;) {
            const std::int32_t s = draw();
            bool clash = false;
            for (int j = 0; j < static_cast<int>(slots.size()); ++j) {
                if (j == i || slots[j].row != slots[i].row ||
                    slots[j].col != slots[i].col)
                    continue;
                if (shifts[j] == s) {
                    clash = true;
                    break;
                }
            }
            if (!clash) {
                shifts[i] = s;
                return;
            }
        }
    };
    for (int i = 0; i < static_cast<int>(slots.size()); ++i) redraw_slot(i);

    if (opts.avoid_4cycles) {
        for (int pass = 0; pass < opts.girth_retry_budget; ++pass) {
            const auto offenders = find_4cycle_slots(proto, shifts, z);
            if (offenders.empty()) break;
            for (int i : offenders) redraw_slot(i);
        }
    }

    const std::int32_t n = z * proto.cols();
    const std::int32_t m = z * proto.rows();
    std::vector<CodeEdge> edges;
    edges.reserve(slots.size() * static_cast<std::size_t>(z));
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const ProtoSlot& s = slots[i];
        for (std::int32_t q = 0; q < z; ++q) {
            edges.push_back({s.row * z + (q + shifts[i]) % z, s.col * z + q,
                             static_cast<std::int16_t>(s.label)});
        }
    }
    std::vector<std::uint8_t> punctured(n, 0);
    for (int c = 0; c < proto.cols(); ++c) {
        if (proto.punctured(c))
            std::fill_n(punctured.begin() + static_cast<std::size_t>(c) * z, z,
                        std::uint8_t{1});
    }
    std::string name = proto.name().empty() ? "code" : proto.name();
    name += "_z" + std::to_string(z);
    return MetLdpcCode(n, m, z, proto.num_edge_types(), std::move(edges),
                       std::move(punctured), std::move(name));
}

CodeStats code_stats(const MetLdpcCode& code) {
    CodeStats stats;
    const std::int32_t n = code.n(), m = code.m();
    std::vector<std::int32_t> vn_deg(n, 0);
    for (std::int32_t v = 0; v < n; ++v)
        vn_deg[v] = code.vn_ptr()[v + 1] - code.vn_ptr()[v];
    for (std::int32_t v = 0; v < n; ++v) stats.vn_degree_histogram[vn_deg[v]]++;

    std::int64_t cns_touching = 0;
    for (std::int32_t c = 0; c < m; ++c) {
        const std::int32_t lo = code.cn_ptr()[c], hi = code.cn_ptr()[c + 1];
        stats.cn_degree_histogram[hi - lo]++;
        bool touches = false;
        for (std::int32_t e = lo; e < hi && !touches; ++e)
            touches = (vn_deg[code.vn_of_edge()[e]] == 1);
        cns_touching += touches ? 1 : 0;
    }
    stats.frac_cns_touching_deg1_vns =
        m > 0 ? static_cast<double>(cns_touching) / m : 0.0;
    return stats;
}

void write_code(const MetLdpcCode& code, const std::string& path) {
    nlohmann::json header;
    header["n"] = code.n();
    header["m"] = code.m();
    header["z"] = code.z();
    header["e"] = code.num_edge_types();
    header["rate"] = code.rate();
    header["name"] = code.name();
    // punctured VNs as [lo, hi) ranges; usually empty
    nlohmann::json ranges = nlohmann::json::array();
    std::int32_t v = 0;
    while (v < code.n()) {
        if (code.punctured(v)) {
            std::int32_t lo = v;
            while (v < code.n() && code.punctured(v)) ++v;
            ranges.push_back({lo, v});
        } else {
            ++v;
        }
    }
    header["punctured_ranges"] = ranges;

    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << header.dump() << "\n";
    out << "cn,vn,edge_type\n";
    const auto& cn = code.cn_of_edge();
    const auto& vn = code.vn_of_edge();
    const auto& ty = code.type_of_edge();
    for (std::size_t i = 0; i < vn.size(); ++i)
        out << cn[i] << "," << vn[i] << "," << ty[i] << "\n";
    if (!out) throw IoError("write failed: " + path);
}

MetLdpcCode load_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open code file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty code file: " + path);
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
        throw IoError("bad code file header: " + std::string(ex.what()));
    }
    const std::int32_t n = header.at("n").get<std::int32_t>();
    const std::int32_t m = header.at("m").get<std::int32_t>();
    const std::int32_t z = header.at("z").get<std::int32_t>();
    const int e = header.at("e").get<int>();
    std::vector<std::uint8_t> punctured(n, 0);
    for (const auto& range : header.at("punctured_ranges")) {
        const std::int32_t lo = range.at(0).get<std::int32_t>();
        const std::int32_t hi = range.at(1).get<std::int32_t>();
        if (lo < 0 || hi > n || lo > hi) throw IoError("bad puncture range");
        std::fill(punctured.begin() + lo, punctured.begin() + hi,
                  std::uint8_t{1});
    }

    if (!std::getline(in, line) || line.rfind("cn,vn,edge_type", 0) != 0)
        throw IoError("missing edge CSV header in " + path);
    std::vector<CodeEdge> edges;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CodeEdge ed;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        auto r1 = std::from_chars(p, end, ed.cn);
        if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ',')
            throw IoError("bad edge row: " + line);
        auto r2 = std::from_chars(r1.ptr + 1, end, ed.vn);
        if (r2.ec != std::errc{} || r2.ptr == end || *r2.ptr != ',')
            throw IoError("bad edge row: " + line);
        auto r3 = std::from_chars(r2.ptr + 1, end, ed.type);
        if (r3.ec != std::errc{}) throw IoError("bad edge row: " + line);
        edges.push_back(ed);
    }
    return MetLdpcCode(n, m, z, e, std::move(edges), std::move(punctured),
                       header.value("name", std::string{}));
}

}  // namespace metldpc
