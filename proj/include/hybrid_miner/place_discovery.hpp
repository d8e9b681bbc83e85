#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <set>
#include <span>
#include <thread>
#include <vector>

#include "causal_graph.hpp"
#include "event_log.hpp"
#include "log_stats.hpp"
#include "petri_net.hpp"

namespace hybrid_miner {

// A candidate (I,O) is a Place with non-empty I and O and I×O ⊆ R_S.
using PlaceCandidate = Place;

struct EnumerationBounds {
  std::size_t max_inputs = 4;
  std::size_t max_outputs = 4;
};

enum class RedundancyFilter {
  all,           // every candidate meeting t_replay becomes a place
  maximal_only,  // drop a place when a strict superset candidate also passes
};

struct DiscoveryParams {
  GraphParams graph;
  double t_replay = 0.9;
  EnumerationBounds bounds;
  RedundancyFilter redundancy = RedundancyFilter::all;
  // Candidates with score_glob below this are pruned without replay.
  std::optional<double> glob_floor;
  // 0: use the hardware concurrency.
  unsigned threads = 0;

  void validate() const {
    std::vector<FieldError> errors;
    try {
      graph.validate();
    } catch (const ParameterError& e) {
      errors = e.errors();
    }
    if (!(t_replay >= 0 && t_replay <= 1)) errors.push_back({"t_replay", "must lie in [0,1]"});
    if (bounds.max_inputs < 1) errors.push_back({"max_inputs", "must be >= 1"});
    if (bounds.max_outputs < 1) errors.push_back({"max_outputs", "must be >= 1"});
    if (glob_floor && !(*glob_floor >= 0 && *glob_floor <= 1)) errors.push_back({"glob_floor", "must lie in [0,1]"});
    if (!errors.empty()) throw ParameterError(std::move(errors));
  }
};

namespace detail {

template <typename Visit>
void subsets_in_order(const std::vector<ActivityId>& pool, std::size_t max_size, std::vector<ActivityId>& current,
                      std::size_t from, Visit& visit) {
  for (std::size_t i = from; i < pool.size(); ++i) {
    current.push_back(pool[i]);
    if (visit(current) && current.size() < max_size) subsets_in_order(pool, max_size, current, i + 1, visit);
    current.pop_back();
  }
}

}  // namespace detail

// Emits every candidate place exactly once, ordered lexicographically by
// sorted I and then sorted O. Input sets whose common strong successors are
// empty are pruned together with all their supersets.
template <typename Callback>
void for_each_candidate(const CausalGraph& graph, const EnumerationBounds& bounds, Callback&& emit) {
  std::vector<ActivityId> sources;
  for (ActivityId a : graph.activities()) {
    bool has_successor = std::any_of(graph.strong().begin(), graph.strong().end(),
                                     [a](const ActivityPair& p) { return p.first == a; });
    if (has_successor) sources.push_back(a);
  }
  auto successors = [&](ActivityId a) {
    std::vector<ActivityId> out;
    for (auto it = graph.strong().lower_bound({a, ActivityId{0}}); it != graph.strong().end() && it->first == a; ++it)
      out.push_back(it->second);
    return out;
  };

  std::vector<ActivityId> current;
  // Common strong successors of each input prefix; an extension only has to
  // intersect one more successor list.
  std::vector<std::vector<ActivityId>> common_stack;
  auto recurse = [&](auto& self, std::size_t from) -> void {
    for (std::size_t i = from; i < sources.size(); ++i) {
      current.push_back(sources[i]);
      std::vector<ActivityId> common = successors(sources[i]);
      if (!common_stack.empty()) {
        std::vector<ActivityId> narrowed;
        std::set_intersection(common_stack.back().begin(), common_stack.back().end(), common.begin(), common.end(),
                              std::back_inserter(narrowed));
        common.swap(narrowed);
      }
      if (!common.empty()) {
        ActivitySet in_set(current);
        std::vector<ActivityId> outputs;
        auto visit_outputs = [&](const std::vector<ActivityId>& out) {
          emit(PlaceCandidate{in_set, ActivitySet(out)});
          return true;
        };
        detail::subsets_in_order(common, bounds.max_outputs, outputs, 0, visit_outputs);
        if (current.size() < bounds.max_inputs) {
          common_stack.push_back(std::move(common));
          self(self, i + 1);
          common_stack.pop_back();
        }
      }
      current.pop_back();
    }
  };
  recurse(recurse, 0);
}

inline std::vector<PlaceCandidate> enumerate_candidates(const CausalGraph& graph, const EnumerationBounds& bounds = {}) {
  std::vector<PlaceCandidate> out;
  for_each_candidate(graph, bounds, [&](PlaceCandidate p) { out.push_back(std::move(p)); });
  return out;
}

struct ReplayResult {
  bool fits = false;
  bool activated = false;

  friend bool operator==(const ReplayResult&, const ReplayResult&) = default;
};

// Single-place token replay: the place must never go negative and must be
// empty at the end. Stops at the first negative step.
inline ReplayResult check_replayable(const PlaceCandidate& p, std::span<const ActivityId> trace) {
  std::int64_t tokens = 0;
  bool activated = false;
  for (ActivityId a : trace) {
    bool consumes = p.outputs.contains(a);
    bool produces = p.inputs.contains(a);
    if (consumes || produces) activated = true;
    if (consumes && --tokens < 0) return {false, true};
    if (produces) ++tokens;
  }
  return {tokens == 0, activated};
}

struct PlaceScore {
  double freq = 0;
  // Undefined when no trace activates the place.
  std::optional<double> rel;
  double glob = 0;
  std::uint64_t fitting_activated = 0;
  std::uint64_t activated = 0;
  std::uint64_t fitting = 0;
  std::uint64_t total = 0;
};

// 1 - |#(I,L) - #(O,L)| / max(#(I,L), #(O,L)); 1 when both counts are 0.
inline double score_glob(const PlaceCandidate& p, const DirectlyFollowsTable& table) {
  double in = static_cast<double>(table.count(p.inputs));
  double out = static_cast<double>(table.count(p.outputs));
  double top = std::max(in, out);
  if (top == 0) return 1.0;
  return 1.0 - std::abs(in - out) / top;
}

inline PlaceScore score(const PlaceCandidate& p, const EventLog& log, const DirectlyFollowsTable& table) {
  PlaceScore s;
  for (const auto& v : log.variants()) {
    ReplayResult r = check_replayable(p, v.trace);
    s.total += v.count;
    if (r.fits) s.fitting += v.count;
    if (r.activated) s.activated += v.count;
    if (r.fits && r.activated) s.fitting_activated += v.count;
  }
  s.freq = static_cast<double>(s.fitting) / static_cast<double>(s.total);
  if (s.activated > 0) s.rel = static_cast<double>(s.fitting_activated) / static_cast<double>(s.activated);
  s.glob = score_glob(p, table);
  return s;
}

inline PlaceScore score(const PlaceCandidate& p, const EventLog& log) { return score(p, log, DirectlyFollowsTable(log)); }

struct ScoredCandidate {
  PlaceCandidate place;
  PlaceScore score;
  bool pruned = false;    // removed by the glob floor, not replayed
  bool accepted = false;  // became a place of the net
};

struct HybridNetDiscovery {
  HybridSystemNet net;
  std::vector<ScoredCandidate> candidates;
};

namespace detail {

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, jobs / 64)));
}

inline bool meets_threshold(const PlaceScore& s, double t_replay) { return s.rel && *s.rel >= t_replay; }

}  // namespace detail

// Scores all candidates (in parallel), keeps those with score_rel >= t_replay
// and assembles the hybrid system net over the graph's activities.
inline HybridNetDiscovery discover_hybrid_net(const EventLog& log, const CausalGraph& graph,
                                              const DiscoveryParams& params) {
  params.validate();
  const EventLog scored_log = graph.activities().includes(log.alphabet()) ? log : project(log, graph.activities());
  const DirectlyFollowsTable table(scored_log);

  std::vector<ScoredCandidate> scored;
  for_each_candidate(graph, params.bounds, [&](PlaceCandidate p) { scored.push_back({std::move(p), {}, false, false}); });

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto& c = scored[i];
      if (params.glob_floor) {
        double glob = score_glob(c.place, table);
        if (glob < *params.glob_floor) {
          c.score.glob = glob;
          c.pruned = true;
          continue;
        }
      }
      c.score = score(c.place, scored_log, table);
    }
  };
  unsigned workers = detail::worker_count(params.threads, scored.size());
  if (workers <= 1) {
    work(0, scored.size());
  } else {
    std::vector<std::jthread> pool;
    std::size_t chunk = (scored.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t begin = w * chunk, end = std::min(scored.size(), begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }

  for (auto& c : scored) c.accepted = !c.pruned && detail::meets_threshold(c.score, params.t_replay);
  if (params.redundancy == RedundancyFilter::maximal_only) {
    std::vector<std::size_t> passing;
    for (std::size_t i = 0; i < scored.size(); ++i)
      if (scored[i].accepted) passing.push_back(i);
    std::vector<bool> dominated(scored.size(), false);
    for (std::size_t i : passing)
      for (std::size_t j : passing) {
        if (i == j) continue;
        const auto& a = scored[i].place;
        const auto& b = scored[j].place;
        if (b.inputs.includes(a.inputs) && b.outputs.includes(a.outputs)) dominated[i] = true;
      }
    for (std::size_t i : passing) scored[i].accepted = !dominated[i];
  }

  std::vector<Place> internal;
  for (const auto& c : scored)
    if (c.accepted) internal.push_back(c.place);

  std::set<ActivityPair> hat;
  for (const auto& p : internal)
    for (ActivityId a : p.inputs)
      for (ActivityId b : p.outputs) hat.emplace(a, b);
  std::set<ActivityPair> sure;
  std::set_difference(graph.strong().begin(), graph.strong().end(), hat.begin(), hat.end(),
                      std::inserter(sure, sure.end()));

  auto net = HybridSystemNet::assemble(graph.vocabulary(), graph.activities(), std::move(internal), std::move(sure),
                                       graph.weak());
  return HybridNetDiscovery{std::move(net), std::move(scored)};
}

}  // namespace hybrid_miner
