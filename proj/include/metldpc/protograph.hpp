#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace metldpc {

// One parallel-edge slot of a base-matrix position, with its edge-type label.
struct ProtoSlot {
    int row = 0;
    int col = 0;
    int slot = 0;   // 0 .. base(row,col)-1
    int label = 0;  // edge type, 1..e
};

// Base matrix with labeled edge-type slots and per-column puncture flags.
// Slots are kept in canonical (row, col, slot) order.
class Protograph {
  public:
    Protograph(std::vector<std::vector<int>> base, std::vector<ProtoSlot> slots,
               std::vector<std::uint8_t> punctured, int num_edge_types,
               std::string name = "");

    int rows() const { return static_cast<int>(base_.size()); }
    int cols() const { return cols_; }
    int num_edge_types() const { return e_; }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    int entry(int row, int col) const { return base_[row][col]; }
    const std::vector<std::vector<int>>& base() const { return base_; }
    const std::vector<ProtoSlot>& slots() const { return slots_; }
    bool punctured(int col) const { return punctured_[col] != 0; }
    const std::vector<std::uint8_t>& punctured() const { return punctured_; }

    int row_degree(int row) const;
    int col_degree(int col) const;

    // slot indices (into slots()) grouped per row / per column / per label
    const std::vector<std::vector<int>>& row_slots() const { return row_slots_; }
    const std::vector<std::vector<int>>& col_slots() const { return col_slots_; }
    const std::vector<std::vector<int>>& label_slots() const {
        return label_slots_;
    }

    // Text-format round trip (see parse_protograph for the format).
    std::string to_text() const;

  private:
    std::vector<std::vector<int>> base_;
    std::vector<ProtoSlot> slots_;
    std::vector<std::uint8_t> punctured_;
    int cols_ = 0;
    int e_ = 0;
    std::string name_;
    std::vector<std::vector<int>> row_slots_, col_slots_, label_slots_;
};

// Parses the protograph text format:
//
//   # comments and blank lines are ignored
//   rows cols e
//   <rows lines, each with cols non-negative integers>
//   (row,col,slot)=label ... one assignment per parallel-edge slot
//   p_0 p_1 ... p_{cols-1}        puncture bits
//
// Every slot must be assigned exactly once; labels must cover 1..e. Parallel
// slots of one position may share a label (that type then has multiplicity
// > 1). Throws ProtographParseError naming the offending line.
Protograph parse_protograph(const std::string& text, std::string name = "");

Protograph load_protograph(const std::string& path);

}  // namespace metldpc
