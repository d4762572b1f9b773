#include "drivensys/io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace drivensys {

std::string format_number(double v) { return fmt::format("{}", v); }

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (const auto& c : columns) cell(std::string_view(c));
  end_row();
}

void CsvWriter::separator() {
  if (row_started_) os_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::cell(double v) {
  separator();
  os_ << format_number(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  separator();
  os_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  separator();
  os_ << text;
  return *this;
}

CsvWriter& CsvWriter::cells(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) cell(v[i]);
  return *this;
}

void CsvWriter::end_row() {
  os_ << '\n';
  row_started_ = false;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    out.push_back(first == std::string::npos ? std::string{}
                                             : field.substr(first, last - first + 1));
  }
  return out;
}

Matrix read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t\r")] == '#') continue;
    std::vector<double> row;
    for (const auto& f : split_csv_line(line)) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(f, &used));
        if (used != f.size()) throw InvalidArgument("bad number '" + f + "' in matrix CSV");
      } catch (const std::logic_error&) {
        throw InvalidArgument("bad number '" + f + "' in matrix CSV");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidArgument("ragged rows in matrix CSV");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument("empty matrix CSV");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open matrix file " + path.string());
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  CsvWriter w(os);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) w.cell(m(r, c));
    w.end_row();
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace drivensys
