#pragma once

#include <algorithm>
#include <cctype>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "event_log.hpp"

namespace hybrid_miner {

struct XesOptions {
  // Drop events whose lifecycle:transition is present and not "complete".
  bool complete_only = true;
};

namespace detail {

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

// Value of the attribute element with key `key` directly below `node`.
inline std::optional<std::string> xes_attribute(const boost::property_tree::ptree& node, std::string_view key) {
  for (const auto& [tag, child] : node) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
    auto attrs = child.get_child_optional("<xmlattr>");
    if (!attrs) continue;
    auto k = attrs->get_optional<std::string>("key");
    if (k && *k == key) {
      if (auto v = attrs->get_optional<std::string>("value")) return *v;
      return std::string{};
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Reads an IEEE 1849 XES document. One trace per <trace>, events in document
// order, activity from concept:name.
inline EventLog parse_xes(std::istream& in, const XesOptions& options = {}) {
  namespace pt = boost::property_tree;
  pt::ptree doc;
  try {
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw LogError(std::string("malformed XML: ") + e.what());
  }
  auto root = doc.get_child_optional("log");
  if (!root) throw LogError("malformed XES: missing <log> root element");

  LogBuilder builder;
  std::size_t trace_index = 0;
  for (const auto& [tag, trace_node] : *root) {
    if (tag != "trace") continue;
    ++trace_index;
    std::vector<std::string> labels;
    for (const auto& [event_tag, event_node] : trace_node) {
      if (event_tag != "event") continue;
      auto name = detail::xes_attribute(event_node, "concept:name");
      if (!name)
        throw LogError("event without concept:name attribute in trace " + std::to_string(trace_index));
      if (options.complete_only) {
        auto lifecycle = detail::xes_attribute(event_node, "lifecycle:transition");
        if (lifecycle && !detail::iequals(*lifecycle, "complete")) continue;
      }
      if (is_reserved_label(*name)) throw LogError("activity label '" + *name + "' is reserved");
      labels.push_back(std::move(*name));
    }
    builder.add(labels);
  }
  if (builder.empty()) throw LogError("empty log");
  return std::move(builder).build();
}

inline EventLog parse_xes_string(const std::string& text, const XesOptions& options = {}) {
  std::istringstream in(text);
  return parse_xes(in, options);
}

}  // namespace hybrid_miner
