#include "metldpc/protograph.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "metldpc/errors.hpp"

namespace metldpc {
namespace {

struct Line {
    int number;
    std::string text;
};

std::vector<Line> content_lines(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        out.push_back({number, line});
    }
    return out;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

int parse_int(const std::string& tok, int line, const std::string& what) {
    int value = 0;
    const auto* begin = tok.data();
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ProtographParseError(ParseErrorKind::bad_header, line,
                                   "expected integer for " + what + ", got '" +
                                       tok + "'");
    }
    return value;
}

}  // namespace

Protograph::Protograph(std::vector<std::vector<int>> base,
                       std::vector<ProtoSlot> slots,
                       std::vector<std::uint8_t> punctured, int num_edge_types,
                       std::string name)
    : base_(std::move(base)),
      slots_(std::move(slots)),
      punctured_(std::move(punctured)),
      e_(num_edge_types),
      name_(std::move(name)) {
    cols_ = base_.empty() ? 0 : static_cast<int>(base_[0].size());
    row_slots_.resize(base_.size());
    col_slots_.resize(cols_);
    label_slots_.resize(e_ + 1);
    for (int i = 0; i < static_cast<int>(slots_.size()); ++i) {
        const ProtoSlot& s = slots_[i];
        row_slots_[s.row].push_back(i);
        col_slots_[s.col].push_back(i);
        label_slots_[s.label].push_back(i);
    }
}

int Protograph::row_degree(int row) const {
    return std::accumulate(base_[row].begin(), base_[row].end(), 0);
}

int Protograph::col_degree(int col) const {
    int d = 0;
    for (const auto& r : base_) d += r[col];
    return d;
}

std::string Protograph::to_text() const {
    std::ostringstream out;
    if (!name_.empty()) out << "# " << name_ << "\n";
    out << rows() << " " << cols() << " " << e_ << "\n";
    for (const auto& row : base_) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? " " : "") << row[c];
        out << "\n";
    }
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        const ProtoSlot& s = slots_[i];
        out << (i ? " " : "") << "(" << s.row << "," << s.col << "," << s.slot
            << ")=" << s.label;
    }
    out << "\n";
    for (int c = 0; c < cols(); ++c)
        out << (c ? " " : "") << (punctured_[c] ? 1 : 0);
    out << "\n";
    return out.str();
}

Protograph parse_protograph(const std::string& text, std::string name) {
    const auto lines = content_lines(text);
    if (lines.empty())
        throw ProtographParseError(ParseErrorKind::bad_header, 1,
                                   "empty protograph file");

    std::size_t cursor = 0;
    const Line& header = lines[cursor++];
    const auto head_toks = tokens_of(header.text);
    if (head_toks.size() != 3)
        throw ProtographParseError(ParseErrorKind::bad_header, header.number,
                                   "header must be 'rows cols e'");
    const int rows = parse_int(head_toks[0], header.number, "rows");
    const int cols = parse_int(head_toks[1], header.number, "cols");
    const int e = parse_int(head_toks[2], header.number, "e");
    if (rows <= 0 || cols <= 0 || e < 0)
        throw ProtographParseError(ParseErrorKind::bad_header, header.number,
                                   "rows/cols must be positive and e >= 0");

    std::vector<std::vector<int>> base(rows);
    int total_slots = 0;
    for (int r = 0; r < rows; ++r) {
        if (cursor >= lines.size())
            throw ProtographParseError(ParseErrorKind::ragged_matrix,
                                       lines.back().number,
                                       "matrix row " + std::to_string(r) +
                                           " missing");
        const Line& line = lines[cursor++];
        const auto toks = tokens_of(line.text);
        if (static_cast<int>(toks.size()) != cols)
            throw ProtographParseError(
                ParseErrorKind::ragged_matrix, line.number,
                "matrix row has " + std::to_string(toks.size()) +
                    " entries, expected " + std::to_string(cols));
        base[r].resize(cols);
        for (int c = 0; c < cols; ++c) {
            const int v = parse_int(toks[c], line.number, "matrix entry");
            if (v < 0)
                throw ProtographParseError(ParseErrorKind::negative_entry,
                                           line.number,
                                           "negative base-matrix entry " +
                                               std::to_string(v));
            base[r][c] = v;
            total_slots += v;
        }
    }

    // Slot assignments: (row,col,slot)=label tokens until every slot is
    // covered. Shipped files keep them on one line.
    std::vector<ProtoSlot> slots;
    slots.reserve(total_slots);
    std::set<std::tuple<int, int, int>> seen;
    int assign_line = header.number;
    while (static_cast<int>(slots.size()) < total_slots) {
        if (cursor >= lines.size())
            throw ProtographParseError(
                ParseErrorKind::missing_label, lines.back().number,
                std::to_string(total_slots - slots.size()) +
                    " edge-type slot assignment(s) missing");
        const Line& line = lines[cursor++];
        assign_line = line.number;
        for (const auto& tok : tokens_of(line.text)) {
            int r = 0, c = 0, s = 0, label = 0;
            char l0 = 0, c1 = 0, c2 = 0, r1 = 0, eq = 0;
            std::istringstream ts(tok);
            ts >> l0 >> r >> c1 >> c >> c2 >> s >> r1 >> eq >> label;
            char extra = 0;
            if (!ts || (ts >> extra) || l0 != '(' || c1 != ',' || c2 != ',' ||
                r1 != ')' || eq != '=')
                throw ProtographParseError(
                    ParseErrorKind::missing_label, line.number,
                    "malformed slot assignment '" + tok + "'");
            if (r < 0 || r >= rows || c < 0 || c >= cols || s < 0 ||
                s >= base[r][c])
                throw ProtographParseError(
                    ParseErrorKind::missing_label, line.number,
                    "slot assignment '" + tok +
                        "' refers to a nonexistent parallel-edge slot");
            if (!seen.insert({r, c, s}).second)
                throw ProtographParseError(ParseErrorKind::duplicate_label,
                                           line.number,
                                           "slot (" + std::to_string(r) + "," +
                                               std::to_string(c) + "," +
                                               std::to_string(s) +
                                               ") assigned twice");
            if (label < 1 || label > e)
                throw ProtographParseError(
                    ParseErrorKind::label_range, line.number,
                    "edge-type label " + std::to_string(label) +
                        " outside 1.." + std::to_string(e));
            slots.push_back({r, c, s, label});
        }
    }
    if (static_cast<int>(slots.size()) != total_slots)
        throw ProtographParseError(ParseErrorKind::duplicate_label, assign_line,
                                   "more slot assignments than parallel-edge "
                                   "slots");

    std::set<int> labels;
    for (const auto& s : slots) labels.insert(s.label);
    if (static_cast<int>(labels.size()) != e)
        throw ProtographParseError(
            ParseErrorKind::label_range, assign_line,
            "labels cover " + std::to_string(labels.size()) +
                " distinct edge types, header declares " + std::to_string(e));

    std::sort(slots.begin(), slots.end(), [](const auto& a, const auto& b) {
        return std::tie(a.row, a.col, a.slot) < std::tie(b.row, b.col, b.slot);
    });

    if (cursor >= lines.size())
        throw ProtographParseError(ParseErrorKind::puncture_mismatch,
                                   lines.back().number,
                                   "puncture bit vector missing");
    const Line& pline = lines[cursor++];
    const auto ptoks = tokens_of(pline.text);
    if (static_cast<int>(ptoks.size()) != cols)
        throw ProtographParseError(
            ParseErrorKind::puncture_mismatch, pline.number,
            "puncture vector has " + std::to_string(ptoks.size()) +
                " entries, expected " + std::to_string(cols));
    std::vector<std::uint8_t> punctured(cols);
    for (int c = 0; c < cols; ++c) {
        const int v = parse_int(ptoks[c], pline.number, "puncture bit");
        if (v != 0 && v != 1)
            throw ProtographParseError(ParseErrorKind::puncture_mismatch,
                                       pline.number,
                                       "puncture bits must be 0 or 1");
        punctured[c] = static_cast<std::uint8_t>(v);
    }

    if (cursor < lines.size())
        throw ProtographParseError(ParseErrorKind::trailing_content,
                                   lines[cursor].number,
                                   "unexpected content after puncture vector");

    return Protograph(std::move(base), std::move(slots), std::move(punctured),
                      e, std::move(name));
}

Protograph load_protograph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open protograph file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_protograph(buf.str(),
                            std::filesystem::path(path).stem().string());
}

}  // namespace metldpc
