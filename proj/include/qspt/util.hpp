// util.hpp — shared plumbing: error types, number formatting, line parsing,
// checksums, and a small indexed worker pool.

#pragma once

#include <atomic>
#include <charconv>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace qspt {

// Thrown when an input file is malformed or violates a structural invariant.
// The message names the offending field.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when the topology generator exhausts its retry budget.
struct GenerationError : std::runtime_error {
  GenerationError(const std::string& what, int attempts_)
      : std::runtime_error(what), attempts(attempts_) {}
  int attempts;
};

// Shortest round-trip decimal for a double ("20" not "20.000000").
inline std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* field) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError(std::string("invalid number for field '") + field + "': " +
                     std::string(s));
  return v;
}

inline long long parse_int(std::string_view s, const char* field) {
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError(std::string("invalid integer for field '") + field +
                     "': " + std::string(s));
  return v;
}

// Splits on single spaces; empty tokens are dropped.
inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Iterates lines of a buffer without copying; '\n' terminated, optional final
// unterminated line included.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line);
    start = end + 1;
  }
}

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// FNV-1a 64-bit, used for corpus manifests.
inline uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Runs fn(i) for i in [0, count) over a small thread pool. Each index is
// independent, so results are deterministic regardless of scheduling. The
// first exception thrown by any index is rethrown on the calling thread.
inline void parallel_for_indexed(size_t count,
                                 const std::function<void(size_t)>& fn) {
  unsigned workers = std::thread::hardware_concurrency();
  if (workers <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  if (workers > count) workers = static_cast<unsigned>(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < count && !failed.load();
           i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace qspt
