#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace coopnet {

// CSV with LF endings and 12-significant-digit decimals; a written file
// re-read parses to identical doubles.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& cols);
  void begin_row();
  void cell(double v);
  void cell(long long v);
  void cell(int v) { cell((long long)v); }
  void cell(unsigned long long v);
  void cell(const std::string& v);
  void end_row();

 private:
  std::ostream& out_;
  bool first_ = true;
};

std::string format_double(double v); // %.12g

} // namespace coopnet
