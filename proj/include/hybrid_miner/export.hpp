#pragma once

#include <sstream>
#include <string>
#include <string_view>

#include "causal_graph.hpp"
#include "log_stats.hpp"
#include "petri_net.hpp"
#include "serialization.hpp"

namespace hybrid_miner {

namespace detail {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fixed(double v, int digits = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace detail

// Causal graph: solid arcs for strong relations, dashed "?" arcs for weak.
inline std::string graph_to_dot(const CausalGraph& g, const DirectlyFollowsTable* table = nullptr) {
  std::ostringstream os;
  os << "digraph causal_graph {\n  rankdir=LR;\n  node [shape=box, style=rounded];\n";
  for (ActivityId a : g.activities()) {
    std::string label = g.name(a);
    if (table && a != kStart && a != kEnd) label += "\n" + std::to_string(table->count(a));
    os << "  a" << a.value << " [label=" << detail::dot_quote(label) << "];\n";
  }
  auto caus = [&](const ActivityPair& p) -> std::string {
    auto it = g.strength().find(p);
    return it == g.strength().end() ? "" : detail::fixed(it->second);
  };
  for (const auto& p : g.strong())
    os << "  a" << p.first.value << " -> a" << p.second.value << " [tooltip=" << detail::dot_quote(caus(p)) << "];\n";
  for (const auto& p : g.weak())
    os << "  a" << p.first.value << " -> a" << p.second.value
       << " [style=dashed, label=\"?\", tooltip=" << detail::dot_quote(caus(p)) << "];\n";
  os << "}\n";
  return os.str();
}

// Hybrid net: boxes for transitions, circles for places, solid normal arcs,
// bold transition-to-transition sure arcs, dashed "?" unsure arcs.
inline std::string net_to_dot(const HybridSystemNet& hsn) {
  const PetriNet& net = hsn.net();
  auto ids = place_ids(hsn);
  std::ostringstream os;
  os << "digraph hybrid_net {\n  rankdir=LR;\n";
  for (ActivityId t : net.transitions())
    os << "  t" << t.value << " [shape=box, label=" << detail::dot_quote(net.name(t)) << "];\n";
  for (std::size_t i = 0; i < net.places().size(); ++i) {
    std::string tokens = hsn.initial_marking()[i] ? "&#9679;" : "";
    os << "  " << ids[i] << " [shape=circle, label=\"" << tokens << "\", xlabel=" << detail::dot_quote(ids[i])
       << "];\n";
  }
  for (std::size_t i = 0; i < net.places().size(); ++i) {
    for (ActivityId t : net.places()[i].inputs) os << "  t" << t.value << " -> " << ids[i] << ";\n";
    for (ActivityId t : net.places()[i].outputs) os << "  " << ids[i] << " -> t" << t.value << ";\n";
  }
  for (const auto& [a, b] : hsn.sure()) os << "  t" << a.value << " -> t" << b.value << " [penwidth=2];\n";
  for (const auto& [a, b] : hsn.unsure())
    os << "  t" << a.value << " -> t" << b.value << " [style=dashed, label=\"?\"];\n";
  os << "}\n";
  return os.str();
}

// PNML (P/T net grammar) for the formal part; sure and unsure arcs are
// carried in a toolspecific element.
inline std::string net_to_pnml(const HybridSystemNet& hsn) {
  using detail::xml_escape;
  const PetriNet& net = hsn.net();
  auto ids = place_ids(hsn);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n"
     << "  <net id=\"hybrid_net\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n"
     << "    <name><text>hybrid net</text></name>\n"
     << "    <page id=\"page1\">\n";
  for (std::size_t i = 0; i < net.places().size(); ++i) {
    os << "      <place id=\"" << ids[i] << "\"><name><text>" << ids[i] << "</text></name>";
    if (hsn.initial_marking()[i])
      os << "<initialMarking><text>" << hsn.initial_marking()[i] << "</text></initialMarking>";
    os << "</place>\n";
  }
  for (ActivityId t : net.transitions())
    os << "      <transition id=\"t" << t.value << "\"><name><text>" << xml_escape(net.name(t))
       << "</text></name></transition>\n";
  std::size_t arc = 0;
  for (std::size_t i = 0; i < net.places().size(); ++i) {
    for (ActivityId t : net.places()[i].inputs)
      os << "      <arc id=\"arc" << ++arc << "\" source=\"t" << t.value << "\" target=\"" << ids[i] << "\"/>\n";
    for (ActivityId t : net.places()[i].outputs)
      os << "      <arc id=\"arc" << ++arc << "\" source=\"" << ids[i] << "\" target=\"t" << t.value << "\"/>\n";
  }
  os << "    </page>\n    <finalmarkings>\n      <marking>\n";
  for (std::size_t i = 0; i < net.places().size(); ++i)
    if (hsn.final_marking()[i])
      os << "        <place idref=\"" << ids[i] << "\"><text>" << hsn.final_marking()[i] << "</text></place>\n";
  os << "      </marking>\n    </finalmarkings>\n"
     << "    <toolspecific tool=\"hybrid-miner\" version=\"1.0\">\n";
  for (const auto& [a, b] : hsn.sure())
    os << "      <sureArc source=\"t" << a.value << "\" target=\"t" << b.value << "\"/>\n";
  for (const auto& [a, b] : hsn.unsure())
    os << "      <unsureArc source=\"t" << a.value << "\" target=\"t" << b.value << "\"/>\n";
  os << "    </toolspecific>\n  </net>\n</pnml>\n";
  return os.str();
}

}  // namespace hybrid_miner
