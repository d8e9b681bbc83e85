#pragma once

#include <cctype>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>

#include "csv_reader.hpp"
#include "errors.hpp"
#include "event_log.hpp"
#include "serialization.hpp"
#include "xes_reader.hpp"

namespace hybrid_miner {

enum class LogFormat { detect, xes, csv, json };

struct LogReadOptions {
  LogFormat format = LogFormat::detect;
  CsvColumns csv;
  XesOptions xes;
};

inline LogFormat parse_log_format(std::string_view name) {
  if (name == "auto" || name.empty()) return LogFormat::detect;
  if (name == "xes") return LogFormat::xes;
  if (name == "csv") return LogFormat::csv;
  if (name == "json") return LogFormat::json;
  throw ParameterError("format", "must be one of auto, xes, csv, json");
}

// File extension first, then the first non-blank character of the content.
inline LogFormat detect_log_format(std::string_view text, std::string_view name_hint = {}) {
  auto ends_with = [&](std::string_view ext) {
    if (name_hint.size() < ext.size()) return false;
    return detail::iequals(name_hint.substr(name_hint.size() - ext.size()), ext);
  };
  if (ends_with(".xes") || ends_with(".xml")) return LogFormat::xes;
  if (ends_with(".csv")) return LogFormat::csv;
  if (ends_with(".json")) return LogFormat::json;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '<') return LogFormat::xes;
    if (c == '{') return LogFormat::json;
    break;
  }
  return LogFormat::csv;
}

inline EventLog read_log_text(const std::string& text, const LogReadOptions& options = {},
                              std::string_view name_hint = {}) {
  LogFormat format = options.format == LogFormat::detect ? detect_log_format(text, name_hint) : options.format;
  switch (format) {
    case LogFormat::xes: return parse_xes_string(text, options.xes);
    case LogFormat::json: {
      Json j = Json::parse(text, nullptr, false);
      if (j.is_discarded()) throw LogError("log is not valid JSON");
      return log_from_json(j);
    }
    default: return parse_csv_string(text, options.csv);
  }
}

inline std::string slurp(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LogError("cannot open '" + path + "'");
  return slurp(in);
}

// "-" reads standard input.
inline EventLog read_log_path(const std::string& path, const LogReadOptions& options, std::istream& stdin_stream) {
  if (path == "-") return read_log_text(slurp(stdin_stream), options);
  return read_log_text(read_file(path), options, path);
}

}  // namespace hybrid_miner
