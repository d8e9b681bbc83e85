#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "causal_graph.hpp"
#include "event_log.hpp"

namespace hybrid_miner {

// A place is identified by its connections: the transitions producing into
// it (inputs) and the transitions consuming from it (outputs). All arcs
// have weight 1.
struct Place {
  ActivitySet inputs;
  ActivitySet outputs;

  friend bool operator==(const Place&, const Place&) = default;
  friend auto operator<=>(const Place&, const Place&) = default;
};

class PetriNet {
 public:
  PetriNet(VocabularyPtr vocabulary, ActivitySet transitions, std::vector<Place> places)
      : vocabulary_(std::move(vocabulary)), transitions_(std::move(transitions)), places_(std::move(places)) {
    if (!vocabulary_) throw ModelError("net without vocabulary");
    std::size_t n = vocabulary_->size();
    presets_.resize(n);
    postsets_.resize(n);
    std::set<Place> seen;
    for (std::size_t i = 0; i < places_.size(); ++i) {
      const Place& p = places_[i];
      if (!seen.insert(p).second) throw ModelError("duplicate place");
      for (ActivityId t : p.inputs) {
        require_transition(t);
        postsets_[t.value].push_back(i);
      }
      for (ActivityId t : p.outputs) {
        require_transition(t);
        presets_[t.value].push_back(i);
      }
    }
  }

  const VocabularyPtr& vocabulary() const noexcept { return vocabulary_; }
  const ActivitySet& transitions() const noexcept { return transitions_; }
  const std::vector<Place>& places() const noexcept { return places_; }
  const std::string& name(ActivityId t) const { return vocabulary_->name(t); }

  bool has_transition(ActivityId t) const { return transitions_.contains(t); }

  // Indices of the input places of t (•t).
  std::span<const std::size_t> preset(ActivityId t) const {
    require_transition(t);
    return presets_[t.value];
  }
  // Indices of the output places of t (t•).
  std::span<const std::size_t> postset(ActivityId t) const {
    require_transition(t);
    return postsets_[t.value];
  }

  std::optional<std::size_t> find_place(const Place& p) const {
    auto it = std::find(places_.begin(), places_.end(), p);
    if (it == places_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - places_.begin());
  }

 private:
  void require_transition(ActivityId t) const {
    if (!transitions_.contains(t) || t.value >= vocabulary_->size())
      throw ModelError("unknown transition '" + (t.value < vocabulary_->size() ? vocabulary_->name(t) : std::string("?")) + "'");
  }

  VocabularyPtr vocabulary_;
  ActivitySet transitions_;
  std::vector<Place> places_;
  std::vector<std::vector<std::size_t>> presets_;
  std::vector<std::vector<std::size_t>> postsets_;
};

// Multiset of places, as token counts indexed like PetriNet::places().
class Marking {
 public:
  Marking() = default;
  explicit Marking(std::size_t place_count) : tokens_(place_count, 0) {}

  static Marking single(std::size_t place_count, std::size_t place) {
    Marking m(place_count);
    m.tokens_.at(place) = 1;
    return m;
  }

  std::uint32_t operator[](std::size_t place) const { return tokens_.at(place); }
  std::uint32_t& operator[](std::size_t place) { return tokens_.at(place); }
  std::size_t size() const noexcept { return tokens_.size(); }
  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (auto t : tokens_) sum += t;
    return sum;
  }

  friend bool operator==(const Marking&, const Marking&) = default;
  friend auto operator<=>(const Marking&, const Marking&) = default;

 private:
  std::vector<std::uint32_t> tokens_;
};

inline bool enabled(const PetriNet& net, const Marking& marking, ActivityId t) {
  for (std::size_t p : net.preset(t))
    if (marking[p] < 1) return false;
  return true;
}

inline Marking fire(const PetriNet& net, const Marking& marking, ActivityId t) {
  if (!enabled(net, marking, t)) throw ModelError("transition '" + net.name(t) + "' is not enabled");
  Marking next = marking;
  for (std::size_t p : net.preset(t)) --next[p];
  for (std::size_t p : net.postset(t)) ++next[p];
  return next;
}

// F̂: transition pairs connected through at least one place.
inline std::set<ActivityPair> connected_pairs(const PetriNet& net) {
  std::set<ActivityPair> out;
  for (const Place& p : net.places())
    for (ActivityId from : p.inputs)
      for (ActivityId to : p.outputs) out.emplace(from, to);
  return out;
}

// Petri net with sure (F_2) and unsure (F_3) transition-to-transition arcs,
// an initial and final marking, and designated source/sink places.
// Consistency with a log and causal graph is checked separately by
// validate_consistency; this type only guarantees referential integrity.
class HybridSystemNet {
 public:
  HybridSystemNet(PetriNet net, std::set<ActivityPair> sure, std::set<ActivityPair> unsure, Marking initial,
                  Marking final, std::optional<std::size_t> source, std::optional<std::size_t> sink)
      : net_(std::move(net)), sure_(std::move(sure)), unsure_(std::move(unsure)), initial_(std::move(initial)),
        final_(std::move(final)), source_(source), sink_(sink) {
    for (const auto* arcs : {&sure_, &unsure_})
      for (const auto& [a, b] : *arcs)
        if (!net_.has_transition(a) || !net_.has_transition(b))
          throw ModelError("sure/unsure arc references an unknown transition");
    if (initial_.size() != net_.places().size() || final_.size() != net_.places().size())
      throw ModelError("marking size does not match the number of places");
    for (auto idx : {source_, sink_})
      if (idx && *idx >= net_.places().size()) throw ModelError("source/sink index out of range");
  }

  // Source place (∅,{▷}) at index 0, sink ({□},∅) at index 1, then the
  // internal places; m_init = [source], m_final = [sink].
  static HybridSystemNet assemble(VocabularyPtr vocabulary, ActivitySet transitions, std::vector<Place> internal,
                                  std::set<ActivityPair> sure, std::set<ActivityPair> unsure) {
    std::vector<Place> places;
    places.reserve(internal.size() + 2);
    places.push_back(Place{{}, {kStart}});
    places.push_back(Place{{kEnd}, {}});
    for (auto& p : internal) places.push_back(std::move(p));
    std::size_t n = places.size();
    PetriNet net(std::move(vocabulary), std::move(transitions), std::move(places));
    return HybridSystemNet(std::move(net), std::move(sure), std::move(unsure), Marking::single(n, 0),
                           Marking::single(n, 1), 0, 1);
  }

  const PetriNet& net() const noexcept { return net_; }
  const std::set<ActivityPair>& sure() const noexcept { return sure_; }
  const std::set<ActivityPair>& unsure() const noexcept { return unsure_; }
  const Marking& initial_marking() const noexcept { return initial_; }
  const Marking& final_marking() const noexcept { return final_; }
  std::optional<std::size_t> source() const noexcept { return source_; }
  std::optional<std::size_t> sink() const noexcept { return sink_; }

  bool is_internal(std::size_t place) const { return place != source_ && place != sink_; }
  std::size_t internal_place_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < net_.places().size(); ++i) n += is_internal(i);
    return n;
  }

  friend bool operator==(const HybridSystemNet& a, const HybridSystemNet& b) {
    return a.net_.transitions() == b.net_.transitions() && a.net_.places() == b.net_.places() &&
           a.sure_ == b.sure_ && a.unsure_ == b.unsure_ && a.initial_ == b.initial_ && a.final_ == b.final_ &&
           a.source_ == b.source_ && a.sink_ == b.sink_;
  }

 private:
  PetriNet net_;
  std::set<ActivityPair> sure_;
  std::set<ActivityPair> unsure_;
  Marking initial_;
  Marking final_;
  std::optional<std::size_t> source_;
  std::optional<std::size_t> sink_;
};

// Replays `trace` on place `p` alone, starting from its initial-marking
// count; true iff the count never goes negative and ends at the final count.
inline bool place_replays(const HybridSystemNet& hsn, std::size_t p, std::span<const ActivityId> trace) {
  const Place& place = hsn.net().places()[p];
  std::int64_t tokens = hsn.initial_marking()[p];
  for (ActivityId a : trace) {
    if (place.outputs.contains(a) && --tokens < 0) return false;
    if (place.inputs.contains(a)) ++tokens;
  }
  return tokens == static_cast<std::int64_t>(hsn.final_marking()[p]);
}

inline void require_transitions(const PetriNet& net, std::span<const ActivityId> trace) {
  for (ActivityId a : trace)
    if (!net.has_transition(a))
      throw ModelError("trace references unknown activity '" +
                       (a.value < net.vocabulary()->size() ? net.name(a) : std::string("?")) + "'");
}

// Membership in the behaviour of the formal part (sure/unsure arcs are
// ignored). With unit arc weights a firing sequence is feasible iff every
// place individually never goes negative, so each place is replayed on its
// own and must end at its final-marking count.
inline bool in_behavior(const HybridSystemNet& hsn, std::span<const ActivityId> trace) {
  require_transitions(hsn.net(), trace);
  for (std::size_t p = 0; p < hsn.net().places().size(); ++p)
    if (!place_replays(hsn, p, trace)) return false;
  return true;
}

struct ConsistencyReport {
  bool transitions_match = false;   // T = A ⊆ activities of L
  bool source_sink_arcs = false;    // p_▷ → ▷ and □ → p_□ are the only arcs touching them
  bool markings = false;            // m_init = [p_▷], m_final = [p_□]
  bool places_connected = false;    // internal places have non-empty pre- and postsets
  bool strong_matches = false;      // R_S = F̂ ∪ F_2, F̂ ∩ F_2 = ∅
  bool weak_matches = false;        // R_W = F_3
  std::vector<std::string> violations;

  bool consistent() const {
    return transitions_match && source_sink_arcs && markings && places_connected && strong_matches && weak_matches;
  }
};

inline ConsistencyReport validate_consistency(const EventLog& log, const CausalGraph& graph,
                                              const HybridSystemNet& hsn) {
  ConsistencyReport r;
  const PetriNet& net = hsn.net();

  ActivitySet occurring;
  for (const auto& v : log.variants())
    for (ActivityId a : v.trace) occurring.insert(a);
  r.transitions_match = net.transitions() == graph.activities() && occurring.includes(graph.activities());
  if (!r.transitions_match) r.violations.push_back("transitions differ from graph activities or are absent from the log");

  auto source = hsn.source();
  auto sink = hsn.sink();
  r.source_sink_arcs = source && sink && *source != *sink &&
                       net.places()[*source] == Place{{}, {kStart}} && net.places()[*sink] == Place{{kEnd}, {}} &&
                       net.has_transition(kStart) && net.has_transition(kEnd);
  if (!r.source_sink_arcs) r.violations.push_back("source/sink places missing or connected to other transitions");

  std::size_t n = net.places().size();
  r.markings = source && sink && hsn.initial_marking() == Marking::single(n, *source) &&
               hsn.final_marking() == Marking::single(n, *sink);
  if (!r.markings) r.violations.push_back("initial/final marking is not [source]/[sink]");

  r.places_connected = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!hsn.is_internal(i)) continue;
    if (net.places()[i].inputs.empty() || net.places()[i].outputs.empty()) {
      r.places_connected = false;
      r.violations.push_back("internal place " + std::to_string(i) + " has an empty preset or postset");
    }
  }

  auto hat = connected_pairs(net);
  std::set<ActivityPair> both;
  std::set_union(hat.begin(), hat.end(), hsn.sure().begin(), hsn.sure().end(), std::inserter(both, both.end()));
  bool overlap = std::any_of(hat.begin(), hat.end(), [&](const ActivityPair& p) { return hsn.sure().count(p) > 0; });
  r.strong_matches = both == graph.strong() && !overlap;
  if (!r.strong_matches) r.violations.push_back("strong relations differ from place connections plus sure arcs");

  r.weak_matches = hsn.unsure() == graph.weak();
  if (!r.weak_matches) r.violations.push_back("weak relations differ from unsure arcs");
  return r;
}

}  // namespace hybrid_miner
