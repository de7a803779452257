#pragma once

// CSV emission with a '#' comment preamble, locale-independent number
// formatting, and atomic file replacement.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "dchaos/error.hpp"

namespace dchaos::cli {

/// Shortest round-trip decimal form; never depends on the C locale.
inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

class CsvTable {
 public:
  CsvTable(std::vector<std::string> preamble, std::vector<std::string> columns)
      : preamble_(std::move(preamble)), columns_(std::move(columns)) {}

  void row(std::vector<std::string> cells) {
    require(cells.size() == columns_.size(), ErrorKind::consistency, "CSV row width differs from the header");
    rows_.push_back(std::move(cells));
  }

  std::size_t size() const noexcept { return rows_.size(); }

  std::string str() const {
    std::string out;
    for (const auto& line : preamble_) out += "# " + line + "\n";
    auto emit = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    emit(columns_);
    for (const auto& r : rows_) emit(r);
    return out;
  }

 private:
  std::vector<std::string> preamble_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to `path.tmp` and renames over `path`.
inline void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::io, "cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    require(static_cast<bool>(out), ErrorKind::io, "write to " + tmp + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot move output into place at " + path);
  }
}

}  // namespace dchaos::cli
