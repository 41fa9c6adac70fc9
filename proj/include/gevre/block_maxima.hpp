#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gevre {

struct Date {
  int year = 0;
  int month = 1;  // 1..12
  int day = 1;    // 1..days_in_month

  friend bool operator==(const Date&, const Date&) = default;
  friend auto operator<=>(const Date&, const Date&) = default;
};

int days_in_month(int year, int month);

// Parses "YYYY-MM-DD"; an optional trailing time-of-day ("T..." or " ...")
// is ignored. Throws DataError on malformed or impossible dates.
Date parse_date(const std::string& text);
std::string format_date(const Date& d);

struct Observation {
  Date date;
  double value;
};

// One raw time series; timestamps strictly increasing, values finite.
struct RawSeries {
  std::string label;
  std::vector<Observation> observations;
};

enum class ExtremumKind { kMax, kMin };

struct BlockRule {
  enum class Kind { kYear, kMonth, kFixedSize };
  Kind kind = Kind::kYear;
  std::size_t size = 0;  // kFixedSize only

  static BlockRule year() { return {Kind::kYear, 0}; }
  static BlockRule month() { return {Kind::kMonth, 0}; }
  static BlockRule fixed(std::size_t n) { return {Kind::kFixedSize, n}; }
};

// "year", "month" or "size:N".
BlockRule parse_block_rule(const std::string& text);
std::string format_block_rule(const BlockRule& rule);

struct BlockRecord {
  double maximum = 0.0;
  std::string block_label;
  std::map<std::string, std::string> group_tags;
};

// Bookkeeping for blocks that were empty or only partially covered.
struct SkipTally {
  std::size_t empty_blocks = 0;
  std::vector<std::string> partial_blocks;  // labels, flagged not dropped
  std::size_t dropped_partial = 0;
};

struct BlockSeries {
  std::vector<BlockRecord> records;
  ExtremumKind kind = ExtremumKind::kMax;
  SkipTally skips;
};

struct ExtractOptions {
  bool drop_partial = false;
};

// One record per non-empty block. Labels are "1984", "1984-07" or "b0001";
// group tags carry series, year and (monthly rule) month name. kind = kMin
// negates, extracts maxima, negates back.
BlockSeries extract_block_maxima(const RawSeries& series, const BlockRule& rule,
                                 ExtremumKind kind,
                                 const ExtractOptions& opts = {});

// Multi-series convenience: per-series extraction, records concatenated.
BlockSeries extract_block_maxima(const std::vector<RawSeries>& series,
                                 const BlockRule& rule, ExtremumKind kind,
                                 const ExtractOptions& opts = {});

struct GroupStats {
  std::string group;  // tag value, or "overall"
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // NaN when count < 2
};

// Sample mean and sd (n-1 denominator) per value of `tag`, plus an overall
// row appended last. Empty tag -> overall only.
std::vector<GroupStats> summarize(const BlockSeries& bs,
                                  const std::string& tag = "");

// 100 * #{maxima <= value} / #maxima, unrounded.
double empirical_percentile(double value, const BlockSeries& bs);

// Distinct values of a tag, in first-appearance order.
std::vector<std::string> tag_values(const BlockSeries& bs,
                                    const std::string& tag);

std::vector<double> maxima_values(const BlockSeries& bs);

}  // namespace gevre
