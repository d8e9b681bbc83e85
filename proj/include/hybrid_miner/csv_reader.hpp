#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <istream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "event_log.hpp"

namespace hybrid_miner {

struct CsvColumns {
  std::string case_column = "case";
  std::string activity_column = "activity";
  // Empty: keep input order within a case.
  std::string timestamp_column = "timestamp";
  char delimiter = ',';
};

namespace detail {

// RFC 4180 records: quoted fields, doubled quotes, CRLF or LF line ends.
inline std::vector<std::vector<std::string>> read_csv_records(std::istream& in, char delimiter) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (ch == delimiter) {
      end_field();
    } else if (ch == '\n') {
      end_record();
    } else if (ch == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      end_record();
    } else {
      field += ch;
      field_started = true;
    }
  }
  if (quoted) throw LogError("unterminated quoted CSV field");
  if (field_started || !record.empty()) end_record();
  return records;
}

inline bool read_int(std::string_view s, std::size_t& pos, std::size_t digits, int& out) {
  if (pos + digits > s.size()) return false;
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + digits, out);
  if (ec != std::errc{} || ptr != s.data() + pos + digits) return false;
  pos += digits;
  return true;
}

}  // namespace detail

// Seconds since the Unix epoch. Accepts plain numbers or ISO 8601
// "YYYY-MM-DD[(T| )HH:MM[:SS[.fff]]][Z|±HH[:]MM]".
inline double parse_timestamp(std::string_view text) {
  auto fail = [&]() -> double { throw LogError("unparsable timestamp '" + std::string(text) + "'"); };
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) return fail();

  if (text.size() < 5 || text[4] != '-') {
    std::string copy(text);
    char* end = nullptr;
    double value = std::strtod(copy.c_str(), &end);
    if (end != copy.c_str() + copy.size()) return fail();
    return value;
  }

  using namespace std::chrono;
  std::size_t pos = 0;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  double frac = 0;
  if (!detail::read_int(text, pos, 4, y) || text[pos++] != '-' || !detail::read_int(text, pos, 2, mo) ||
      pos >= text.size() || text[pos++] != '-' || !detail::read_int(text, pos, 2, d))
    return fail();
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return fail();

  int offset_minutes = 0;
  if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
    ++pos;
    if (!detail::read_int(text, pos, 2, h) || pos >= text.size() || text[pos++] != ':' ||
        !detail::read_int(text, pos, 2, mi))
      return fail();
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      if (!detail::read_int(text, pos, 2, s)) return fail();
      if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
        ++pos;
        double scale = 0.1;
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
          frac += (text[pos] - '0') * scale;
          scale /= 10;
          ++pos;
        }
        if (pos == start) return fail();
      }
    }
    if (h > 23 || mi > 59 || s > 60) return fail();
    if (pos < text.size()) {
      char sign = text[pos];
      if (sign == 'Z') {
        ++pos;
      } else if (sign == '+' || sign == '-') {
        ++pos;
        int oh = 0, om = 0;
        if (!detail::read_int(text, pos, 2, oh)) return fail();
        if (pos < text.size() && text[pos] == ':') ++pos;
        if (pos < text.size() && !detail::read_int(text, pos, 2, om)) return fail();
        offset_minutes = (sign == '+' ? 1 : -1) * (oh * 60 + om);
      }
    }
  }
  if (pos != text.size()) return fail();
  auto days = sys_days(ymd).time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + s + frac - offset_minutes * 60.0;
}

// Rows grouped by case (first-seen order), ordered by timestamp with ties
// kept in input order.
inline EventLog parse_csv(std::istream& in, const CsvColumns& columns = {}) {
  auto records = detail::read_csv_records(in, columns.delimiter);
  if (records.empty()) throw LogError("CSV without header row");
  const auto& header = records.front();
  auto column = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw LogError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::size_t case_col = column(columns.case_column);
  std::size_t act_col = column(columns.activity_column);
  bool timed = !columns.timestamp_column.empty();
  std::size_t time_col = timed ? column(columns.timestamp_column) : 0;

  struct Row {
    double time;
    std::string activity;
  };
  std::vector<std::vector<Row>> cases;
  std::unordered_map<std::string, std::size_t> case_index;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    std::size_t needed = std::max({case_col, act_col, time_col}) + 1;
    if (rec.size() < needed) throw LogError("row " + std::to_string(r + 1) + " lacks mapped columns");
    const auto& activity = rec[act_col];
    if (is_reserved_label(activity)) throw LogError("activity label '" + activity + "' is reserved");
    auto [it, inserted] = case_index.emplace(rec[case_col], cases.size());
    if (inserted) cases.emplace_back();
    cases[it->second].push_back({timed ? parse_timestamp(rec[time_col]) : 0.0, activity});
  }
  if (cases.empty()) throw LogError("empty log");

  LogBuilder builder;
  for (auto& rows : cases) {
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.time < b.time; });
    std::vector<std::string> labels;
    labels.reserve(rows.size());
    for (auto& row : rows) labels.push_back(std::move(row.activity));
    builder.add(labels);
  }
  return std::move(builder).build();
}

inline EventLog parse_csv_string(const std::string& text, const CsvColumns& columns = {}) {
  std::istringstream in(text);
  return parse_csv(in, columns);
}

}  // namespace hybrid_miner
