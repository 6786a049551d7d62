#include "gibbslab/report.hpp"

#include <cstdio>

namespace gibbslab {

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), n_cols_(columns.size()) {
  if (!out_) throw Error("CsvWriter: cannot open " + path);
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_cols_) throw Error("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << format_float(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_) throw Error("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

}  // namespace gibbslab
