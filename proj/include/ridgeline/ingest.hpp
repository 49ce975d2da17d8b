#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ridgeline/errors.hpp"
#include "ridgeline/geo.hpp"
#include "ridgeline/rng.hpp"

namespace ridgeline {

struct IncidentRecord {
  std::string primary_type;
  GeoPoint location;
};

struct FilterReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped_missing = 0;
  std::size_t rows_dropped_year = 0;
  std::size_t rows_dropped_unmapped = 0;
  std::size_t rows_after_type_filter = 0;
  std::map<std::string, std::size_t> per_type_counts;
  std::map<std::string, std::size_t> dropped_type_counts;
};

struct CsvSchema {
  std::string type_column = "Primary Type";
  std::string lat_column = "Latitude";
  std::string lon_column = "Longitude";
  std::string date_column = "Date";
  std::optional<int> year;  // filter when set and the date column exists
};

namespace detail {

// Minimal RFC-4180 reader: quoted fields, doubled-quote escapes, CRLF and
// embedded newlines inside quotes.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& fields) {
    fields.clear();
    int c = in_.get();
    if (c == EOF) return false;
    std::string field;
    bool quoted = false;
    while (true) {
      if (quoted) {
        if (c == EOF) throw IngestError("unterminated quoted CSV field");
        if (c == '"') {
          const int peek = in_.peek();
          if (peek == '"') {
            field.push_back('"');
            in_.get();
          } else {
            quoted = false;
          }
        } else {
          field.push_back(static_cast<char>(c));
        }
      } else {
        if (c == EOF || c == '\n') {
          if (!field.empty() && field.back() == '\r') field.pop_back();
          fields.push_back(std::move(field));
          return true;
        }
        if (c == ',') {
          fields.push_back(std::move(field));
          field.clear();
        } else if (c == '"' && field.empty()) {
          quoted = true;
        } else {
          field.push_back(static_cast<char>(c));
        }
      }
      c = in_.get();
    }
  }

 private:
  std::istream& in_;
};

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::string upper(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

inline std::optional<double> parse_double(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) return std::nullopt;
  return v;
}

// Extracts a year from "MM/DD/YYYY hh:mm:ss AM" or ISO "YYYY-MM-DD..." dates.
inline std::optional<int> parse_year(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.size() >= 4) {
    bool iso = true;
    for (int i = 0; i < 4; ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) iso = false;
    if (iso && (s.size() == 4 || s[4] == '-')) return std::stoi(s.substr(0, 4));
  }
  const auto first = s.find('/');
  if (first == std::string::npos) return std::nullopt;
  const auto second = s.find('/', first + 1);
  if (second == std::string::npos || second + 5 > s.size()) return std::nullopt;
  const std::string y = s.substr(second + 1, 4);
  for (char ch : y)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
  return std::stoi(y);
}

}  // namespace detail

// Streaming load: keeps rows whose type, latitude and longitude parse and
// pass coordinate validation; everything else is dropped and counted.
inline std::pair<std::vector<IncidentRecord>, FilterReport> load_csv(
    std::istream& in, const CsvSchema& schema = {}) {
  detail::CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields) || fields.empty() ||
      (fields.size() == 1 && detail::trim(fields[0]).empty()))
    throw HeaderError("missing CSV header row");

  std::ptrdiff_t type_idx = -1, lat_idx = -1, lon_idx = -1, date_idx = -1;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string name = detail::trim(fields[i]);
    if (name == schema.type_column) type_idx = static_cast<std::ptrdiff_t>(i);
    if (name == schema.lat_column) lat_idx = static_cast<std::ptrdiff_t>(i);
    if (name == schema.lon_column) lon_idx = static_cast<std::ptrdiff_t>(i);
    if (name == schema.date_column) date_idx = static_cast<std::ptrdiff_t>(i);
  }
  if (type_idx < 0) throw SchemaError("missing column: " + schema.type_column);
  if (lat_idx < 0) throw SchemaError("missing column: " + schema.lat_column);
  if (lon_idx < 0) throw SchemaError("missing column: " + schema.lon_column);

  auto field_at = [&](std::ptrdiff_t idx) -> std::string {
    return idx >= 0 && static_cast<std::size_t>(idx) < fields.size()
               ? fields[static_cast<std::size_t>(idx)]
               : std::string{};
  };

  std::vector<IncidentRecord> records;
  FilterReport report;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing newline
    ++report.rows_read;
    const std::string type = detail::trim(field_at(type_idx));
    const auto lat = detail::parse_double(field_at(lat_idx));
    const auto lon = detail::parse_double(field_at(lon_idx));
    if (type.empty() || !lat || !lon || *lat < -90.0 || *lat > 90.0 ||
        *lon < -180.0 || *lon > 180.0) {
      ++report.rows_dropped_missing;
      continue;
    }
    if (schema.year && date_idx >= 0) {
      const auto y = detail::parse_year(field_at(date_idx));
      if (!y || *y != *schema.year) {
        ++report.rows_dropped_year;
        continue;
      }
    }
    records.push_back({type, {*lat, *lon}});
    ++report.per_type_counts[type];
  }
  report.rows_after_type_filter = records.size();
  return {std::move(records), report};
}

inline std::pair<std::vector<IncidentRecord>, FilterReport> load_csv(
    const std::string& path, const CsvSchema& schema = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("cannot open CSV file: " + path);
  return load_csv(in, schema);
}

// Source label (upper-cased for lookup) -> canonical Part I category.
using TypeMapping = std::map<std::string, std::string>;

// Default mapping from the Chicago Data Portal's "Primary Type" vocabulary
// to the eight UCR Part I categories. The portal records assault at primary-
// type granularity only, so ASSAULT maps to aggravated-assault as-is; edit a
// mapping file to change that. Canonical names map to themselves so the
// filter is idempotent.
inline const TypeMapping& default_part1_mapping() {
  static const TypeMapping mapping = {
      {"THEFT", "larceny-theft"},
      {"LARCENY-THEFT", "larceny-theft"},
      {"ASSAULT", "aggravated-assault"},
      {"AGGRAVATED-ASSAULT", "aggravated-assault"},
      {"BURGLARY", "burglary"},
      {"MOTOR VEHICLE THEFT", "motor-vehicle-theft"},
      {"MOTOR-VEHICLE-THEFT", "motor-vehicle-theft"},
      {"ROBBERY", "robbery"},
      {"CRIM SEXUAL ASSAULT", "forcible-rape"},
      {"CRIMINAL SEXUAL ASSAULT", "forcible-rape"},
      {"FORCIBLE-RAPE", "forcible-rape"},
      {"HOMICIDE", "criminal-homicide"},
      {"CRIMINAL-HOMICIDE", "criminal-homicide"},
      {"ARSON", "arson"},
  };
  return mapping;
}

// Mapping file: one "SOURCE LABEL = canonical-name" per line, '#' comments.
inline TypeMapping load_mapping(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError("cannot open mapping file: " + path);
  TypeMapping mapping;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw IngestError("mapping line " + std::to_string(lineno) +
                        " lacks '=': " + t);
    const std::string key = detail::upper(detail::trim(t.substr(0, eq)));
    const std::string value = detail::trim(t.substr(eq + 1));
    if (key.empty() || value.empty())
      throw IngestError("mapping line " + std::to_string(lineno) +
                        " has an empty side");
    mapping[key] = value;
  }
  return mapping;
}

// Retains records whose label maps to a Part I category; unmapped labels are
// dropped and counted, never silently ignored.
inline std::pair<std::vector<IncidentRecord>, FilterReport> filter_part1(
    const std::vector<IncidentRecord>& records,
    const TypeMapping& mapping = default_part1_mapping()) {
  std::vector<IncidentRecord> kept;
  FilterReport report;
  report.rows_read = records.size();
  for (const auto& rec : records) {
    const auto it = mapping.find(detail::upper(detail::trim(rec.primary_type)));
    if (it == mapping.end()) {
      ++report.rows_dropped_unmapped;
      ++report.dropped_type_counts[rec.primary_type];
      continue;
    }
    kept.push_back({it->second, rec.location});
    ++report.per_type_counts[it->second];
  }
  report.rows_after_type_filter = kept.size();
  return {std::move(kept), report};
}

// n records drawn uniformly without replacement, deterministic in seed; the
// result order is the draw order.
inline GeoPointSet subsample(const std::vector<IncidentRecord>& records,
                             std::size_t n, std::uint64_t seed) {
  if (n < 1 || n > records.size())
    throw ParameterError("subsample size must be in [1, |records|], got " +
                         std::to_string(n));
  Rng rng(seed);
  const auto idx = sample_without_replacement(records.size(), n, rng);
  GeoPointSet out;
  out.reserve(n);
  for (auto i : idx) out.push_back(records[i].location);
  return out;
}

}  // namespace ridgeline
