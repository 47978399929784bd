// qtable.hpp — the location-indexed Q-table.
//
// One value exists for every ordered pair (v, u) with u a grid neighbor of v,
// and for no other pair; looking up anything else yields the -100 sentinel
// without storing it. Rows are keyed by linear location index and laid out
// CSR-style: a dense W^2+1 row-offset array over one flat column/value pair
// of arrays, columns sorted within each row. The same table is threaded
// through every training graph — that sharing across instances is what lets
// a table trained on one corpus route an unseen graph.
//
// File format (text):
//   W <int>
//   R <real>
//   version 1
//   <from_index> <to_index> <q>     (one line per stored entry, row order)
// Values use shortest round-trip decimals, so save/load is lossless.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qspt/grid.hpp"

namespace qspt {

inline constexpr double kAbsentQ = -100.0;

class QTable {
 public:
  // All grid-neighbor entries zero-initialized.
  static QTable init(const GridParams& params);

  const GridParams& params() const { return params_; }
  size_t entry_count() const { return values_.size(); }

  // Stored value for (from, to), or kAbsentQ when `to` is not a grid
  // neighbor of `from`.
  double lookup(uint32_t from, uint32_t to) const;
  double lookup(Location from, Location to) const {
    return lookup(loc_index(from, params_), loc_index(to, params_));
  }

  // Position in the flat value array for (from, to); SIZE_MAX when absent.
  // Hot loops resolve slots once per graph and then index directly.
  size_t slot(uint32_t from, uint32_t to) const;

  double value_at(size_t slot) const { return values_[slot]; }
  void set_value_at(size_t slot, double v) { values_[slot] = v; }

  // Row access for iteration and serialization.
  size_t row_begin(uint32_t from) const { return row_start_[from]; }
  size_t row_end(uint32_t from) const { return row_start_[from + 1]; }
  uint32_t col_at(size_t slot) const { return cols_[slot]; }

  const std::vector<double>& values() const { return values_; }

  bool operator==(const QTable&) const = default;

 private:
  GridParams params_;
  std::vector<uint64_t> row_start_;  // size W^2 + 1
  std::vector<uint32_t> cols_;       // to-indices, sorted within each row
  std::vector<double> values_;
};

void save_qtable(const QTable& table, std::ostream& out);
void save_qtable_file(const QTable& table, const std::string& path);

// Validates that the entry set equals the grid neighbor structure for the
// header's (W, R); throws ParseError otherwise.
QTable load_qtable(std::istream& in);
QTable load_qtable_file(const std::string& path);

}  // namespace qspt
