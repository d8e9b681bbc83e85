#pragma once

#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "causal_graph.hpp"
#include "conformance.hpp"
#include "event_log.hpp"
#include "log_stats.hpp"
#include "petri_net.hpp"
#include "place_discovery.hpp"

namespace hybrid_miner {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Event logs: {alphabet:[...], variants:[{trace:[...], count:n}]}

inline Json labels_json(const Vocabulary& vocab, const std::vector<ActivityId>& ids) {
  Json out = Json::array();
  for (ActivityId a : ids) out.push_back(vocab.name(a));
  return out;
}

inline Json log_to_json(const EventLog& log) {
  Json variants = Json::array();
  for (const auto& v : log.variants())
    variants.push_back({{"trace", labels_json(*log.vocabulary(), v.trace)}, {"count", v.count}});
  return {{"alphabet", labels_json(*log.vocabulary(), log.alphabet().items())}, {"variants", std::move(variants)}};
}

inline EventLog log_from_json(const Json& j) {
  try {
    LogBuilder builder;
    for (const auto& v : j.at("variants")) {
      auto labels = v.at("trace").get<std::vector<std::string>>();
      builder.add(labels, v.value("count", std::uint64_t{1}));
    }
    if (builder.empty()) throw LogError("empty log");
    return std::move(builder).build();
  } catch (const Json::exception& e) {
    throw LogError(std::string("malformed log JSON: ") + e.what());
  }
}

// Summary in the shape of a dataset description: cases, events, classes.
inline Json log_summary_json(const EventLog& log) {
  return {{"cases", log.case_count()},
          {"events", log.raw_event_count()},
          {"events_with_endpoints", log.event_count()},
          {"classes", log.alphabet().size()},
          {"variants", log.variants().size()}};
}

// ---------------------------------------------------------------------------
// Parameters

inline const char* to_string(Rel1Numerator n) { return n == Rel1Numerator::literal ? "literal" : "symmetric"; }
inline const char* to_string(RedundancyFilter f) { return f == RedundancyFilter::all ? "all" : "maximal-only"; }

inline Json params_to_json(const GraphParams& p) {
  return {{"t_freq", p.t_freq},
          {"c", p.causality.c},
          {"w", p.causality.w},
          {"t_rs", p.t_rs},
          {"t_rw", p.t_rw},
          {"rel1_numerator", to_string(p.causality.rel1_numerator)}};
}

inline Json params_to_json(const DiscoveryParams& p) {
  Json j = params_to_json(p.graph);
  j["t_replay"] = p.t_replay;
  j["max_inputs"] = p.bounds.max_inputs;
  j["max_outputs"] = p.bounds.max_outputs;
  j["redundancy"] = to_string(p.redundancy);
  j["glob_floor"] = p.glob_floor ? Json(*p.glob_floor) : Json(nullptr);
  return j;
}

namespace detail {

template <typename T>
void read_field(const Json& j, const char* key, T& out, std::vector<FieldError>& errors) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  if constexpr (std::is_unsigned_v<T>) {
    if (!j.at(key).is_number_unsigned()) {
      errors.push_back({key, "must be a non-negative integer"});
      return;
    }
  }
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception&) {
    errors.push_back({key, "has the wrong type"});
  }
}

inline void read_graph_fields(const Json& j, GraphParams& p, std::vector<FieldError>& errors) {
  if (j.contains("t_freq") && j.at("t_freq").is_number() && j.at("t_freq").get<double>() < 1)
    errors.push_back({"t_freq", "must be a positive integer"});
  else
    read_field(j, "t_freq", p.t_freq, errors);
  read_field(j, "c", p.causality.c, errors);
  read_field(j, "w", p.causality.w, errors);
  read_field(j, "t_rs", p.t_rs, errors);
  read_field(j, "t_rw", p.t_rw, errors);
  if (j.contains("rel1_numerator")) {
    std::string mode = j.at("rel1_numerator").is_string() ? j.at("rel1_numerator").get<std::string>() : "";
    if (mode == "literal")
      p.causality.rel1_numerator = Rel1Numerator::literal;
    else if (mode == "symmetric")
      p.causality.rel1_numerator = Rel1Numerator::symmetric;
    else
      errors.push_back({"rel1_numerator", "must be 'literal' or 'symmetric'"});
  }
}

}  // namespace detail

// Missing fields keep the values of `p`; validation runs at the end.
inline GraphParams graph_params_from_json(const Json& j, GraphParams p = {}) {
  if (!j.is_object()) throw ParameterError("body", "expected a JSON object");
  std::vector<FieldError> errors;
  detail::read_graph_fields(j, p, errors);
  if (!errors.empty()) throw ParameterError(std::move(errors));
  p.validate();
  return p;
}

inline DiscoveryParams discovery_params_from_json(const Json& j, DiscoveryParams p = {}) {
  if (!j.is_object()) throw ParameterError("body", "expected a JSON object");
  std::vector<FieldError> errors;
  detail::read_graph_fields(j, p.graph, errors);
  detail::read_field(j, "t_replay", p.t_replay, errors);
  detail::read_field(j, "max_inputs", p.bounds.max_inputs, errors);
  detail::read_field(j, "max_outputs", p.bounds.max_outputs, errors);
  if (j.contains("redundancy")) {
    std::string mode = j.at("redundancy").is_string() ? j.at("redundancy").get<std::string>() : "";
    if (mode == "all")
      p.redundancy = RedundancyFilter::all;
    else if (mode == "maximal-only")
      p.redundancy = RedundancyFilter::maximal_only;
    else
      errors.push_back({"redundancy", "must be 'all' or 'maximal-only'"});
  }
  if (j.contains("glob_floor")) {
    if (j.at("glob_floor").is_null())
      p.glob_floor.reset();
    else if (j.at("glob_floor").is_number())
      p.glob_floor = j.at("glob_floor").get<double>();
    else
      errors.push_back({"glob_floor", "has the wrong type"});
  }
  if (!errors.empty()) throw ParameterError(std::move(errors));
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// Directly-follows statistics

inline Json stats_to_json(const EventLog& log, const DirectlyFollowsTable& table, const CausalityParams& params) {
  const auto& vocab = *log.vocabulary();
  Json activities = Json::array();
  for (ActivityId a : log.alphabet())
    activities.push_back({{"name", vocab.name(a)},
                          {"count", table.count(a)},
                          {"successors", table.successors(a)},
                          {"predecessors", table.predecessors(a)}});
  Json pairs = Json::array();
  for (ActivityId a : log.alphabet())
    for (ActivityId b : log.alphabet()) {
      if (table.follows(a, b) == 0 && table.follows(b, a) == 0) continue;
      pairs.push_back({{"source", vocab.name(a)},
                       {"target", vocab.name(b)},
                       {"count", table.follows(a, b)},
                       {"rel1", rel1(table, a, b, params.rel1_numerator)},
                       {"rel2", rel2(table, a, b, params.c)},
                       {"causality", causality(table, a, b, params)}});
    }
  return {{"summary", log_summary_json(log)},
          {"params", {{"c", params.c}, {"w", params.w}, {"rel1_numerator", to_string(params.rel1_numerator)}}},
          {"activities", std::move(activities)},
          {"pairs", std::move(pairs)}};
}

// ---------------------------------------------------------------------------
// Causal graphs

inline Json graph_to_json(const CausalGraph& g, const DirectlyFollowsTable* table = nullptr) {
  Json activities = Json::array();
  for (ActivityId a : g.activities()) {
    Json node = {{"name", g.name(a)}};
    if (table) node["frequency"] = table->count(a);
    activities.push_back(std::move(node));
  }
  auto edges = [&](const std::set<ActivityPair>& rel) {
    Json out = Json::array();
    for (const auto& pr : rel) {
      Json e = {{"source", g.name(pr.first)}, {"target", g.name(pr.second)}};
      if (auto it = g.strength().find(pr); it != g.strength().end()) e["causality"] = it->second;
      out.push_back(std::move(e));
    }
    return out;
  };
  return {{"activities", std::move(activities)}, {"strong", edges(g.strong())}, {"weak", edges(g.weak())}};
}

inline CausalGraph graph_from_json(const Json& j, VocabularyPtr base = nullptr) {
  try {
    std::vector<std::string> labels;
    for (const auto& n : j.at("activities")) labels.push_back(n.is_string() ? n.get<std::string>() : n.at("name").get<std::string>());
    auto vocab = base ? base->extended_with(labels) : Vocabulary().extended_with(labels);
    ActivitySet acts;
    for (const auto& l : labels) acts.insert(vocab->at(l));
    auto read = [&](const char* key, std::map<ActivityPair, double>& strength) {
      std::set<ActivityPair> rel;
      for (const auto& e : j.at(key)) {
        ActivityPair p{vocab->at(e.at("source").get<std::string>()), vocab->at(e.at("target").get<std::string>())};
        rel.insert(p);
        if (e.contains("causality")) strength[p] = e.at("causality").get<double>();
      }
      return rel;
    };
    std::map<ActivityPair, double> strength;
    auto strong = read("strong", strength);
    auto weak = read("weak", strength);
    return CausalGraph(vocab, std::move(acts), std::move(strong), std::move(weak), std::move(strength));
  } catch (const Json::exception& e) {
    throw LogError(std::string("malformed causal graph JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Hybrid system nets

// "source", "sink", or "p<k>" for the k-th internal place (1-based).
inline std::vector<std::string> place_ids(const HybridSystemNet& hsn) {
  std::vector<std::string> ids;
  std::size_t k = 0;
  for (std::size_t i = 0; i < hsn.net().places().size(); ++i) {
    if (hsn.source() == i)
      ids.push_back("source");
    else if (hsn.sink() == i)
      ids.push_back("sink");
    else
      ids.push_back("p" + std::to_string(++k));
  }
  return ids;
}

inline Json net_to_json(const HybridSystemNet& hsn) {
  const PetriNet& net = hsn.net();
  const auto& vocab = *net.vocabulary();
  auto ids = place_ids(hsn);
  Json places = Json::array();
  for (std::size_t i = 0; i < net.places().size(); ++i)
    places.push_back({{"id", ids[i]},
                      {"inputs", labels_json(vocab, net.places()[i].inputs.items())},
                      {"outputs", labels_json(vocab, net.places()[i].outputs.items())}});
  auto marking = [&](const Marking& m) {
    Json out = Json::object();
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) out[ids[i]] = m[i];
    return out;
  };
  auto arcs = [&](const std::set<ActivityPair>& rel) {
    Json out = Json::array();
    for (const auto& [a, b] : rel) out.push_back(Json::array({vocab.name(a), vocab.name(b)}));
    return out;
  };
  return {{"transitions", labels_json(vocab, net.transitions().items())},
          {"places", std::move(places)},
          {"source", hsn.source() ? Json(ids[*hsn.source()]) : Json(nullptr)},
          {"sink", hsn.sink() ? Json(ids[*hsn.sink()]) : Json(nullptr)},
          {"initial_marking", marking(hsn.initial_marking())},
          {"final_marking", marking(hsn.final_marking())},
          {"sure", arcs(hsn.sure())},
          {"unsure", arcs(hsn.unsure())}};
}

// Transition labels are interned on top of `base` (when given) so the net
// shares activity ids with a log read earlier.
inline HybridSystemNet net_from_json(const Json& j, VocabularyPtr base = nullptr) {
  try {
    auto labels = j.at("transitions").get<std::vector<std::string>>();
    auto vocab = base ? base->extended_with(labels) : Vocabulary().extended_with(labels);
    ActivitySet transitions;
    for (const auto& l : labels) transitions.insert(vocab->at(l));
    auto to_set = [&](const Json& arr) {
      ActivitySet s;
      for (const auto& l : arr) s.insert(vocab->at(l.get<std::string>()));
      return s;
    };
    std::vector<Place> places;
    std::map<std::string, std::size_t> index;
    for (const auto& p : j.at("places")) {
      auto id = p.at("id").get<std::string>();
      if (!index.emplace(id, places.size()).second) throw ModelError("duplicate place id '" + id + "'");
      places.push_back(Place{to_set(p.at("inputs")), to_set(p.at("outputs"))});
    }
    auto lookup = [&](const std::string& id) {
      auto it = index.find(id);
      if (it == index.end()) throw ModelError("unknown place id '" + id + "'");
      return it->second;
    };
    std::size_t n = places.size();
    auto marking = [&](const char* key) {
      Marking m(n);
      if (j.contains(key))
        for (const auto& [id, tokens] : j.at(key).items()) m[lookup(id)] = tokens.get<std::uint32_t>();
      return m;
    };
    auto arcs = [&](const char* key) {
      std::set<ActivityPair> out;
      if (j.contains(key))
        for (const auto& arc : j.at(key))
          out.emplace(vocab->at(arc.at(0).get<std::string>()), vocab->at(arc.at(1).get<std::string>()));
      return out;
    };
    auto optional_place = [&](const char* key) -> std::optional<std::size_t> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return lookup(j.at(key).get<std::string>());
    };
    PetriNet net(vocab, std::move(transitions), std::move(places));
    return HybridSystemNet(std::move(net), arcs("sure"), arcs("unsure"), marking("initial_marking"),
                           marking("final_marking"), optional_place("source"), optional_place("sink"));
  } catch (const Json::exception& e) {
    throw ModelError(std::string("malformed net JSON: ") + e.what());
  }
}

// Size metrics: |T|, |P|, |F̂|, sure and unsure arc counts.
inline Json net_metrics_json(const HybridSystemNet& hsn) {
  return {{"transitions", hsn.net().transitions().size()},
          {"places", hsn.net().places().size()},
          {"internal_places", hsn.internal_place_count()},
          {"connected_pairs", connected_pairs(hsn.net()).size()},
          {"sure", hsn.sure().size()},
          {"unsure", hsn.unsure().size()}};
}

// ---------------------------------------------------------------------------
// Scores and quality

inline Json score_to_json(const Vocabulary& vocab, const PlaceCandidate& p, const PlaceScore& s) {
  return {{"inputs", labels_json(vocab, p.inputs.items())},
          {"outputs", labels_json(vocab, p.outputs.items())},
          {"freq", s.freq},
          {"rel", s.rel ? Json(*s.rel) : Json(nullptr)},
          {"glob", s.glob},
          {"fitting", s.fitting},
          {"activated", s.activated},
          {"fitting_activated", s.fitting_activated},
          {"total", s.total}};
}

inline Json scores_to_json(const Vocabulary& vocab, const std::vector<ScoredCandidate>& candidates) {
  Json out = Json::array();
  for (const auto& c : candidates) {
    Json j = score_to_json(vocab, c.place, c.score);
    j["pruned"] = c.pruned;
    j["accepted"] = c.accepted;
    out.push_back(std::move(j));
  }
  return out;
}

inline Json quality_to_json(const HybridSystemNet& hsn, const QualityReport& q) {
  const auto& vocab = *hsn.net().vocabulary();
  Json variants = Json::array();
  for (const auto& v : q.verdicts)
    variants.push_back({{"trace", labels_json(vocab, v.trace)}, {"count", v.count}, {"fits", v.fits}});
  auto ids = place_ids(hsn);
  Json violations = Json::array();
  for (std::size_t i = 0; i < q.place_violations.size(); ++i)
    violations.push_back({{"place", ids[i]}, {"violations", q.place_violations[i]}});
  return {{"fitness", q.fitness_trace},
          {"precision", q.precision_escaping},
          {"fitting_cases", q.fitting_cases},
          {"total_cases", q.total_cases},
          {"enabled", q.precision.enabled},
          {"escaping", q.precision.escaping},
          {"metrics", net_metrics_json(hsn)},
          {"variants", std::move(variants)},
          {"place_violations", std::move(violations)}};
}

inline Json consistency_to_json(const ConsistencyReport& r) {
  return {{"consistent", r.consistent()},
          {"transitions_match", r.transitions_match},
          {"source_sink_arcs", r.source_sink_arcs},
          {"markings", r.markings},
          {"places_connected", r.places_connected},
          {"strong_matches", r.strong_matches},
          {"weak_matches", r.weak_matches},
          {"violations", r.violations}};
}

}  // namespace hybrid_miner
