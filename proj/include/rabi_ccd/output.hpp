#pragma once

#include <string>
#include <vector>

#include "rabi_ccd/experiments.hpp"

namespace rabi_ccd {

/// Write a result table as CSV: header `time_s,mean_<a>,stderr_<a>,...`
/// (first column named after the table axis), 17-significant-digit decimal
/// values, LF line endings.  A sidecar `<path>.meta.json` records the fully
/// resolved spec, seeds, truncation and code version.  Output depends only
/// on the table contents, so identical runs give identical bytes.
void write_csv(const ResultTable& table, const std::string& path);

/// Parse "2pi*<kHz>" (e.g. "2pi*5" = 2 pi x 5 kHz) or a plain rad/s number.
double parse_frequency(const std::string& text);

/// Minimal CSV reader for round-trip tests: returns header names and rows.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvData read_csv(const std::string& path);

}  // namespace rabi_ccd
