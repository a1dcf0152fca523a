#include "coopnet/csv.hpp"

#include <cstdio>

namespace coopnet {

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void CsvWriter::header(const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out_ << ',';
    out_ << cols[i];
  }
  out_ << '\n';
}

void CsvWriter::begin_row() { first_ = true; }

void CsvWriter::cell(double v) {
  if (!first_) out_ << ',';
  first_ = false;
  out_ << format_double(v);
}

void CsvWriter::cell(long long v) {
  if (!first_) out_ << ',';
  first_ = false;
  out_ << v;
}

void CsvWriter::cell(unsigned long long v) {
  if (!first_) out_ << ',';
  first_ = false;
  out_ << v;
}

void CsvWriter::cell(const std::string& v) {
  if (!first_) out_ << ',';
  first_ = false;
  out_ << v;
}

void CsvWriter::end_row() { out_ << '\n'; }

} // namespace coopnet
