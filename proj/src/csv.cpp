#include "gevre/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "gevre/errors.hpp"

namespace gevre {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

double parse_value(const std::string& field, const std::string& origin,
                   std::size_t line_no) {
  const std::string t = trim(field);
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw DataError(origin + ": line " + std::to_string(line_no) +
                    ": bad numeric value '" + field + "'");
  }
  return v;
}

[[noreturn]] void fail_open(const std::string& path) {
  throw DataError("cannot open '" + path + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<RawSeries> read_raw_series(std::istream& in,
                                       const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(origin + ": empty input");
  }
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  bool multi;
  if (header.size() == 2 && header[0] == "date" && header[1] == "value") {
    multi = false;
  } else if (header.size() == 3 && header[0] == "series" &&
             header[1] == "date" && header[2] == "value") {
    multi = true;
  } else {
    throw DataError(origin +
                    ": line 1: expected header 'date,value' or "
                    "'series,date,value'");
  }

  std::vector<RawSeries> series;
  auto find_series = [&](const std::string& label) -> RawSeries& {
    for (auto& s : series) {
      if (s.label == label) return s;
    }
    series.push_back({label, {}});
    return series.back();
  };

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DataError(origin + ": line " + std::to_string(line_no) + ": " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    std::string label = multi ? trim(fields[0]) : "";
    Date date;
    try {
      date = parse_date(trim(fields[multi ? 1 : 0]));
    } catch (const DataError& e) {
      throw DataError(origin + ": line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    double value = parse_value(fields[multi ? 2 : 1], origin, line_no);
    RawSeries& s = find_series(label);
    if (!s.observations.empty() && !(s.observations.back().date < date)) {
      throw DataError(origin + ": line " + std::to_string(line_no) +
                      ": timestamps not strictly increasing");
    }
    s.observations.push_back({date, value});
  }
  if (series.empty() || series[0].observations.empty()) {
    throw DataError(origin + ": no data rows");
  }
  return series;
}

std::vector<RawSeries> read_raw_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_open(path);
  return read_raw_series(in, path);
}

void to_percent_change(std::vector<RawSeries>& series) {
  for (auto& s : series) {
    if (s.observations.size() < 2) {
      throw DataError("series '" + s.label +
                      "' too short for percent-change conversion");
    }
    std::vector<Observation> out;
    out.reserve(s.observations.size() - 1);
    for (std::size_t i = 1; i < s.observations.size(); ++i) {
      double prev = s.observations[i - 1].value;
      if (prev == 0.0) {
        throw DataError("series '" + s.label +
                        "': zero level, percent change undefined");
      }
      double pct = 100.0 * (s.observations[i].value - prev) / prev;
      out.push_back({s.observations[i].date, pct});
    }
    s.observations = std::move(out);
  }
}

void write_block_series(std::ostream& out, const BlockSeries& bs) {
  std::set<std::string> tag_names;
  for (const auto& r : bs.records) {
    for (const auto& [k, v] : r.group_tags) tag_names.insert(k);
  }
  out << "block";
  for (const auto& t : tag_names) out << ',' << t;
  out << ",maximum\n";
  for (const auto& r : bs.records) {
    out << r.block_label;
    for (const auto& t : tag_names) {
      auto it = r.group_tags.find(t);
      out << ',' << (it == r.group_tags.end() ? "" : it->second);
    }
    out << ',' << format_double(r.maximum) << '\n';
  }
}

void write_block_series_file(const std::string& path, const BlockSeries& bs) {
  std::ofstream out(path);
  if (!out) fail_open(path);
  write_block_series(out, bs);
}

BlockSeries read_block_series(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(origin + ": empty input");
  }
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  if (header.size() < 2 || header.front() != "block" ||
      header.back() != "maximum") {
    throw DataError(origin +
                    ": line 1: expected header 'block,<tags...>,maximum'");
  }
  BlockSeries bs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DataError(origin + ": line " + std::to_string(line_no) + ": " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    BlockRecord rec;
    rec.block_label = trim(fields[0]);
    for (std::size_t i = 1; i + 1 < fields.size(); ++i) {
      rec.group_tags[header[i]] = trim(fields[i]);
    }
    rec.maximum = parse_value(fields.back(), origin, line_no);
    bs.records.push_back(std::move(rec));
  }
  if (bs.records.empty()) {
    throw DataError(origin + ": no data rows");
  }
  return bs;
}

BlockSeries read_block_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_open(path);
  return read_block_series(in, path);
}

void write_matrix(std::ostream& out, const std::vector<std::string>& columns,
                  const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_double(row[i]);
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path,
                       const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) fail_open(path);
  write_matrix(out, columns, rows);
}

Matrix read_matrix(std::istream& in, const std::string& origin) {
  Matrix m;
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(origin + ": empty input");
  }
  m.columns = split_csv_line(line);
  for (auto& c : m.columns) c = trim(c);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != m.columns.size()) {
      throw DataError(origin + ": line " + std::to_string(line_no) + ": " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(m.columns.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      row[i] = parse_value(fields[i], origin, line_no);
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_open(path);
  return read_matrix(in, path);
}

}  // namespace gevre
