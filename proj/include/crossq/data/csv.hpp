#pragma once

#include <filesystem>
#include <iosfwd>

#include "crossq/data/panel.hpp"

namespace crossq::data {

/// Panel schema: header `date,stock_id,price,<feature columns...>`, one row per
/// (month, stock), dates as YYYY-MM, empty fields for missing values.
/// Out-of-order dates are sorted (with a warning); duplicate keys, malformed
/// or non-finite values are rejected with the offending line number.
PanelData read_panel_csv(std::istream &in, const std::string &source = "<stream>");
PanelData load_panel_csv(const std::filesystem::path &path);
void write_panel_csv(const PanelData &panel, std::ostream &out);

/// Benchmark schema: header `date,return`.
BenchmarkSeries read_benchmark_csv(std::istream &in, const std::string &source = "<stream>");
BenchmarkSeries load_benchmark_csv(const std::filesystem::path &path);
void write_benchmark_csv(const BenchmarkSeries &series, std::ostream &out);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

} // namespace crossq::data
