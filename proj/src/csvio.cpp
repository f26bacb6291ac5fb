#include "thermo/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace thermo {

CsvTable::CsvTable(std::vector<std::string> columns) : n_cols_(columns.size()) {
  if (columns.empty()) throw std::invalid_argument("CsvTable: no columns");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) body_ += ',';
    body_ += columns[i];
  }
  body_ += '\n';
}

std::string CsvTable::format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void CsvTable::begin_row() {
  if (in_row_) throw std::logic_error("CsvTable: row already open");
  in_row_ = true;
  cursor_ = 0;
}

void CsvTable::add(double value) { add(format_double(value)); }

void CsvTable::add(long long value) { add(std::to_string(value)); }

void CsvTable::add(const std::string& value) {
  if (!in_row_) throw std::logic_error("CsvTable: no open row");
  if (cursor_ >= n_cols_) throw std::logic_error("CsvTable: too many cells in row");
  if (cursor_) body_ += ',';
  body_ += value;
  ++cursor_;
}

void CsvTable::end_row() {
  if (!in_row_ || cursor_ != n_cols_)
    throw std::logic_error("CsvTable: row has the wrong number of cells");
  body_ += '\n';
  in_row_ = false;
}

std::string CsvTable::str() const { return body_; }

void CsvTable::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body_;
}

}  // namespace thermo
