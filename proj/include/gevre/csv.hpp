#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gevre/block_maxima.hpp"

namespace gevre {

// Round-trip-exact decimal rendering of a double (%.17g).
std::string format_double(double v);

// Raw input CSV: header `date,value` (single series) or `series,date,value`.
// Malformed rows raise DataError naming the line number.
std::vector<RawSeries> read_raw_series(std::istream& in,
                                       const std::string& origin = "<stream>");
std::vector<RawSeries> read_raw_series_file(const std::string& path);

// In-place conversion of level series to simple percent daily changes,
// 100 * (v[t] - v[t-1]) / v[t-1]; drops each series' first observation.
void to_percent_change(std::vector<RawSeries>& series);

// Block-maxima CSV: header `block,<tag names...>,maximum` with tag columns
// in sorted order.
void write_block_series(std::ostream& out, const BlockSeries& bs);
void write_block_series_file(const std::string& path, const BlockSeries& bs);
BlockSeries read_block_series(std::istream& in,
                              const std::string& origin = "<stream>");
BlockSeries read_block_series_file(const std::string& path);

// Numeric matrix CSV with a header row (chain draws, R^k draws).
void write_matrix(std::ostream& out, const std::vector<std::string>& columns,
                  const std::vector<std::vector<double>>& rows);
void write_matrix_file(const std::string& path,
                       const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows);
struct Matrix {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
Matrix read_matrix(std::istream& in, const std::string& origin = "<stream>");
Matrix read_matrix_file(const std::string& path);

}  // namespace gevre
