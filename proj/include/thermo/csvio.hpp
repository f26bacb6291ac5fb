#pragma once

#include <string>
#include <vector>

namespace thermo {

// CSV assembly with a fixed column order and 17-significant-digit numeric
// formatting; the serialized text is a pure function of the cell values.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void begin_row();
  void add(double value);
  void add(long long value);
  void add(const std::string& value);
  void end_row();

  std::string str() const;
  void write_file(const std::string& path) const;

  static std::string format_double(double value);

 private:
  std::size_t n_cols_;
  std::size_t cursor_ = 0;
  bool in_row_ = false;
  std::string body_;
};

}  // namespace thermo
