#pragma once

#include "drivensys/common.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace drivensys {

/// Shortest decimal form that round-trips to the same double.
std::string format_number(double v);

/// Minimal CSV emitter; values go through format_number.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& columns);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(std::string_view text);
  CsvWriter& cells(const Vector& v);
  void end_row();

 private:
  void separator();
  std::ostream& os_;
  bool row_started_ = false;
};

/// Splits one CSV line on commas (no quoting support; our files never quote).
std::vector<std::string> split_csv_line(const std::string& line);

Matrix read_matrix_csv(std::istream& is);
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& os, const Matrix& m);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace drivensys
