#include "gevre/block_maxima.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gevre/errors.hpp"

namespace gevre {

namespace {

const char* kMonthNames[] = {"January",   "February", "March",    "April",
                             "May",       "June",     "July",     "August",
                             "September", "October",  "November", "December"};

std::string pad4(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04zu", n);
  return buf;
}

std::string year_label(int year) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", year);
  return buf;
}

std::string month_label(int year, int month) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

}  // namespace

int days_in_month(int year, int month) {
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return days[month - 1];
}

Date parse_date(const std::string& text) {
  std::string core = text;
  auto cut = core.find_first_of("T ");
  if (cut != std::string::npos) core = core.substr(0, cut);
  int y = 0, m = 0, d = 0;
  char extra = 0;
  if (std::sscanf(core.c_str(), "%d-%d-%d%c", &y, &m, &d, &extra) != 3) {
    throw DataError("bad date '" + text + "' (expected YYYY-MM-DD)");
  }
  if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) {
    throw DataError("impossible date '" + text + "'");
  }
  return {y, m, d};
}

std::string format_date(const Date& d) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

BlockRule parse_block_rule(const std::string& text) {
  if (text == "year") return BlockRule::year();
  if (text == "month") return BlockRule::month();
  if (text.rfind("size:", 0) == 0) {
    long n = 0;
    try {
      n = std::stol(text.substr(5));
    } catch (const std::exception&) {
      n = 0;
    }
    if (n <= 0) throw DataError("bad block size in rule '" + text + "'");
    return BlockRule::fixed(static_cast<std::size_t>(n));
  }
  throw DataError("unknown block rule '" + text + "' (year|month|size:N)");
}

std::string format_block_rule(const BlockRule& rule) {
  switch (rule.kind) {
    case BlockRule::Kind::kYear:
      return "year";
    case BlockRule::Kind::kMonth:
      return "month";
    case BlockRule::Kind::kFixedSize:
      return "size:" + std::to_string(rule.size);
  }
  return "";
}

namespace {

void validate_series(const RawSeries& series) {
  if (series.observations.empty()) {
    throw DataError("empty series" +
                    (series.label.empty() ? "" : " '" + series.label + "'"));
  }
  for (std::size_t i = 0; i < series.observations.size(); ++i) {
    if (!std::isfinite(series.observations[i].value)) {
      throw DataError("non-finite value in series at position " +
                      std::to_string(i));
    }
    if (i > 0 && !(series.observations[i - 1].date < series.observations[i].date)) {
      throw DataError("timestamps not strictly increasing at position " +
                      std::to_string(i));
    }
  }
}

std::string tally_label(const RawSeries& series, const std::string& block) {
  return series.label.empty() ? block : series.label + ":" + block;
}

BlockSeries extract_max(const RawSeries& series, const BlockRule& rule,
                        const ExtractOptions& opts) {
  BlockSeries out;
  out.kind = ExtremumKind::kMax;
  const auto& obs = series.observations;

  struct Block {
    std::string label;
    std::map<std::string, std::string> tags;
    double maximum;
    bool partial = false;
  };
  std::vector<Block> blocks;

  auto base_tags = [&]() {
    std::map<std::string, std::string> tags;
    if (!series.label.empty()) tags["series"] = series.label;
    return tags;
  };

  if (rule.kind == BlockRule::Kind::kYear) {
    std::size_t i = 0;
    while (i < obs.size()) {
      int year = obs[i].date.year;
      double mx = obs[i].value;
      std::size_t j = i + 1;
      while (j < obs.size() && obs[j].date.year == year) {
        mx = std::max(mx, obs[j].value);
        ++j;
      }
      Block b;
      b.label = year_label(year);
      b.tags = base_tags();
      b.tags["year"] = b.label;
      b.maximum = mx;
      blocks.push_back(std::move(b));
      i = j;
    }
    // Years inside the span with no data at all count as skipped blocks.
    int span = obs.back().date.year - obs.front().date.year + 1;
    out.skips.empty_blocks = static_cast<std::size_t>(span) - blocks.size();
    if (obs.front().date.month > 1) blocks.front().partial = true;
    if (obs.back().date.month < 12) blocks.back().partial = true;
  } else if (rule.kind == BlockRule::Kind::kMonth) {
    std::size_t i = 0;
    while (i < obs.size()) {
      int year = obs[i].date.year;
      int month = obs[i].date.month;
      double mx = obs[i].value;
      std::size_t j = i + 1;
      while (j < obs.size() && obs[j].date.year == year &&
             obs[j].date.month == month) {
        mx = std::max(mx, obs[j].value);
        ++j;
      }
      Block b;
      b.label = month_label(year, month);
      b.tags = base_tags();
      b.tags["year"] = year_label(year);
      b.tags["month"] = kMonthNames[month - 1];
      b.maximum = mx;
      blocks.push_back(std::move(b));
      i = j;
    }
    int span = (obs.back().date.year - obs.front().date.year) * 12 +
               (obs.back().date.month - obs.front().date.month) + 1;
    out.skips.empty_blocks = static_cast<std::size_t>(span) - blocks.size();
    if (obs.front().date.day > 1) blocks.front().partial = true;
    const Date& last = obs.back().date;
    if (last.day < days_in_month(last.year, last.month)) blocks.back().partial = true;
  } else {
    std::size_t n = rule.size;
    for (std::size_t i = 0; i < obs.size(); i += n) {
      std::size_t end = std::min(i + n, obs.size());
      double mx = obs[i].value;
      for (std::size_t j = i + 1; j < end; ++j) mx = std::max(mx, obs[j].value);
      Block b;
      b.label = "b" + pad4(i / n + 1);
      b.tags = base_tags();
      b.tags["year"] = year_label(obs[i].date.year);
      b.tags["block"] = b.label;
      b.maximum = mx;
      b.partial = (end - i) < n;
      blocks.push_back(std::move(b));
    }
  }

  for (auto& b : blocks) {
    if (b.partial) {
      out.skips.partial_blocks.push_back(tally_label(series, b.label));
      if (opts.drop_partial) {
        ++out.skips.dropped_partial;
        continue;
      }
    }
    out.records.push_back({b.maximum, b.label, std::move(b.tags)});
  }
  return out;
}

}  // namespace

BlockSeries extract_block_maxima(const RawSeries& series, const BlockRule& rule,
                                 ExtremumKind kind,
                                 const ExtractOptions& opts) {
  validate_series(series);
  if (kind == ExtremumKind::kMax) {
    return extract_max(series, rule, opts);
  }
  // min = -max(-x)
  RawSeries negated = series;
  for (auto& o : negated.observations) o.value = -o.value;
  BlockSeries out = extract_max(negated, rule, opts);
  for (auto& r : out.records) r.maximum = -r.maximum;
  out.kind = ExtremumKind::kMin;
  return out;
}

BlockSeries extract_block_maxima(const std::vector<RawSeries>& series,
                                 const BlockRule& rule, ExtremumKind kind,
                                 const ExtractOptions& opts) {
  if (series.empty()) throw DataError("no input series");
  BlockSeries out;
  out.kind = kind;
  for (const auto& s : series) {
    BlockSeries part = extract_block_maxima(s, rule, kind, opts);
    out.records.insert(out.records.end(),
                       std::make_move_iterator(part.records.begin()),
                       std::make_move_iterator(part.records.end()));
    out.skips.empty_blocks += part.skips.empty_blocks;
    out.skips.dropped_partial += part.skips.dropped_partial;
    out.skips.partial_blocks.insert(out.skips.partial_blocks.end(),
                                    part.skips.partial_blocks.begin(),
                                    part.skips.partial_blocks.end());
  }
  return out;
}

std::vector<GroupStats> summarize(const BlockSeries& bs,
                                  const std::string& tag) {
  if (bs.records.empty()) throw DataError("no block maxima to summarize");

  auto stats_of = [](const std::vector<double>& v, const std::string& name) {
    GroupStats g;
    g.group = name;
    g.count = v.size();
    double sum = 0.0;
    for (double x : v) sum += x;
    g.mean = sum / static_cast<double>(v.size());
    if (v.size() < 2) {
      g.sd = std::numeric_limits<double>::quiet_NaN();
    } else {
      double ss = 0.0;
      for (double x : v) ss += (x - g.mean) * (x - g.mean);
      g.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return g;
  };

  std::vector<GroupStats> out;
  if (!tag.empty()) {
    std::vector<std::string> order = tag_values(bs, tag);
    for (const auto& value : order) {
      std::vector<double> v;
      for (const auto& r : bs.records) {
        auto it = r.group_tags.find(tag);
        if (it != r.group_tags.end() && it->second == value) {
          v.push_back(r.maximum);
        }
      }
      out.push_back(stats_of(v, value));
    }
  }
  out.push_back(stats_of(maxima_values(bs), "overall"));
  return out;
}

double empirical_percentile(double value, const BlockSeries& bs) {
  if (bs.records.empty()) throw DataError("no block maxima");
  std::size_t at_or_below = 0;
  for (const auto& r : bs.records) {
    if (r.maximum <= value) ++at_or_below;
  }
  return 100.0 * static_cast<double>(at_or_below) /
         static_cast<double>(bs.records.size());
}

std::vector<std::string> tag_values(const BlockSeries& bs,
                                    const std::string& tag) {
  std::vector<std::string> order;
  for (const auto& r : bs.records) {
    auto it = r.group_tags.find(tag);
    if (it == r.group_tags.end()) {
      throw DataError("tag '" + tag + "' missing from block records");
    }
    if (std::find(order.begin(), order.end(), it->second) == order.end()) {
      order.push_back(it->second);
    }
  }
  return order;
}

std::vector<double> maxima_values(const BlockSeries& bs) {
  std::vector<double> v;
  v.reserve(bs.records.size());
  for (const auto& r : bs.records) v.push_back(r.maximum);
  return v;
}

}  // namespace gevre
