#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbslab/lattice.hpp"

namespace gibbslab {

using Json = nlohmann::ordered_json;

// 17 significant digits, '.' decimal, C locale: round-trip exact.
std::string format_float(double v);

inline Json region_json(const Region& r) { return Json(r.sites()); }

// Plain CSV: header once, one row per call, floats via format_float.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t n_cols_;
};

}  // namespace gibbslab
