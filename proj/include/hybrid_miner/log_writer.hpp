#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "event_log.hpp"
#include "export.hpp"

namespace hybrid_miner {

// Writes raw traces (no ▷/□) as XES, one <trace> per case with sequential
// concept:name values and complete lifecycle.
inline void write_xes(std::ostream& os, const std::vector<std::vector<std::string>>& traces) {
  using detail::xml_escape;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<log xes.version=\"1.0\" xes.features=\"nested-attributes\">\n"
     << "  <extension name=\"Concept\" prefix=\"concept\" uri=\"http://www.xes-standard.org/concept.xesext\"/>\n"
     << "  <extension name=\"Lifecycle\" prefix=\"lifecycle\" uri=\"http://www.xes-standard.org/lifecycle.xesext\"/>\n";
  for (std::size_t i = 0; i < traces.size(); ++i) {
    os << "  <trace>\n    <string key=\"concept:name\" value=\"case" << (i + 1) << "\"/>\n";
    for (const auto& a : traces[i])
      os << "    <event><string key=\"concept:name\" value=\"" << xml_escape(a)
         << "\"/><string key=\"lifecycle:transition\" value=\"complete\"/></event>\n";
    os << "  </trace>\n";
  }
  os << "</log>\n";
}

inline void write_csv(std::ostream& os, const std::vector<std::vector<std::string>>& traces) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  os << "case,activity,timestamp\n";
  std::uint64_t tick = 0;
  for (std::size_t i = 0; i < traces.size(); ++i)
    for (const auto& a : traces[i]) os << "case" << (i + 1) << ',' << quote(a) << ',' << tick++ << '\n';
}

// The variants of `log` expanded back to raw cases (endpoints dropped).
inline std::vector<std::vector<std::string>> raw_traces(const EventLog& log) {
  std::vector<std::vector<std::string>> out;
  for (const auto& v : log.variants()) {
    std::vector<std::string> labels;
    for (std::size_t i = 1; i + 1 < v.trace.size(); ++i) labels.push_back(log.name(v.trace[i]));
    out.insert(out.end(), v.count, labels);
  }
  return out;
}

}  // namespace hybrid_miner
