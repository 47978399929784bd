#include "qspt/qtable.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "qspt/util.hpp"

namespace qspt {

QTable QTable::init(const GridParams& params) {
  validate_params(params);
  const uint32_t w = static_cast<uint32_t>(params.width);
  const uint32_t cells = w * w;
  const auto offsets = range_offsets(params);

  QTable q;
  q.params_ = params;
  q.row_start_.assign(cells + 1, 0);

  // Counting pass, then fill. Offsets are lexicographic, so each row comes
  // out sorted by to-index.
  for (uint32_t x = 0; x < w; ++x) {
    for (uint32_t y = 0; y < w; ++y) {
      uint64_t count = 0;
      for (auto [dx, dy] : offsets) {
        int64_t ux = static_cast<int64_t>(x) + dx;
        int64_t uy = static_cast<int64_t>(y) + dy;
        if (ux >= 0 && ux < w && uy >= 0 && uy < w) ++count;
      }
      q.row_start_[x * w + y + 1] = count;
    }
  }
  for (uint32_t i = 0; i < cells; ++i) q.row_start_[i + 1] += q.row_start_[i];

  q.cols_.resize(q.row_start_[cells]);
  q.values_.assign(q.row_start_[cells], 0.0);
  for (uint32_t x = 0; x < w; ++x) {
    for (uint32_t y = 0; y < w; ++y) {
      size_t at = q.row_start_[x * w + y];
      for (auto [dx, dy] : offsets) {
        int64_t ux = static_cast<int64_t>(x) + dx;
        int64_t uy = static_cast<int64_t>(y) + dy;
        if (ux >= 0 && ux < w && uy >= 0 && uy < w)
          q.cols_[at++] = static_cast<uint32_t>(ux) * w + static_cast<uint32_t>(uy);
      }
    }
  }
  return q;
}

size_t QTable::slot(uint32_t from, uint32_t to) const {
  const uint32_t cells =
      static_cast<uint32_t>(params_.width) * static_cast<uint32_t>(params_.width);
  if (from >= cells) return SIZE_MAX;
  auto first = cols_.begin() + static_cast<ptrdiff_t>(row_start_[from]);
  auto last = cols_.begin() + static_cast<ptrdiff_t>(row_start_[from + 1]);
  auto it = std::lower_bound(first, last, to);
  if (it == last || *it != to) return SIZE_MAX;
  return static_cast<size_t>(it - cols_.begin());
}

double QTable::lookup(uint32_t from, uint32_t to) const {
  size_t s = slot(from, to);
  return s == SIZE_MAX ? kAbsentQ : values_[s];
}

void save_qtable(const QTable& table, std::ostream& out) {
  out << "W " << table.params().width << "\n";
  out << "R " << fmt_double(table.params().range) << "\n";
  out << "version 1\n";
  const uint32_t cells = static_cast<uint32_t>(table.params().width) *
                         static_cast<uint32_t>(table.params().width);
  // Worst case per line is well under 64 bytes; the slack keeps the pointer
  // arithmetic trivially in bounds.
  char buf[96];
  char* const end = buf + sizeof(buf) - 8;
  for (uint32_t from = 0; from < cells; ++from) {
    for (size_t s = table.row_begin(from); s < table.row_end(from); ++s) {
      char* p = buf;
      p = std::to_chars(p, end, from).ptr;
      *p++ = ' ';
      p = std::to_chars(p, end, table.col_at(s)).ptr;
      *p++ = ' ';
      p = std::to_chars(p, end, table.value_at(s)).ptr;
      *p++ = '\n';
      out.write(buf, p - buf);
    }
  }
}

void save_qtable_file(const QTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_qtable(table, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

QTable load_qtable(std::istream& in) {
  std::string line;
  auto header = [&](const char* key) -> std::string {
    if (!std::getline(in, line)) throw ParseError("truncated q-table header");
    auto tokens = split_ws(line);
    if (tokens.size() != 2 || tokens[0] != key)
      throw ParseError(std::string("expected header field '") + key + "'");
    return std::string(tokens[1]);
  };
  GridParams params;
  params.width = static_cast<int32_t>(parse_int(header("W"), "W"));
  params.range = parse_double(header("R"), "R");
  if (parse_int(header("version"), "version") != 1)
    throw ParseError("version: unsupported q-table version");

  QTable q = QTable::init(params);
  std::vector<char> seen(q.entry_count(), 0);
  size_t records = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    uint32_t from = 0, to = 0;
    double value = 0;
    auto r1 = std::from_chars(p, end, from);
    if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ' ')
      throw ParseError("q-table record: bad from_index");
    auto r2 = std::from_chars(r1.ptr + 1, end, to);
    if (r2.ec != std::errc{} || r2.ptr == end || *r2.ptr != ' ')
      throw ParseError("q-table record: bad to_index");
    auto r3 = std::from_chars(r2.ptr + 1, end, value);
    if (r3.ec != std::errc{} || r3.ptr != end)
      throw ParseError("q-table record: bad q_value");

    size_t s = q.slot(from, to);
    if (s == SIZE_MAX)
      throw ParseError("q-table record: (" + std::to_string(from) + ", " +
                       std::to_string(to) + ") is not a grid-neighbor pair");
    if (seen[s]) throw ParseError("q-table record: duplicate entry");
    seen[s] = 1;
    q.set_value_at(s, value);
    ++records;
  }
  if (records != q.entry_count())
    throw ParseError("q-table is missing entries: has " +
                     std::to_string(records) + ", grid structure needs " +
                     std::to_string(q.entry_count()));
  return q;
}

QTable load_qtable_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return load_qtable(in);
}

}  // namespace qspt
