#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace hexmpc::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Write-to-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

void ensure_directory(const std::string& path);
std::string join(const std::string& dir, const std::string& name);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

/// Full-precision numeric formatting ("%.17g") so reruns compare bit-exactly.
std::string format_double(double v);

/// Line-buffered CSV writer with a fixed, documented header.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);
  void row_numeric(const std::vector<double>& cells);
  void flush();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
};
CsvTable read_csv(const std::string& path);

}  // namespace hexmpc::io
