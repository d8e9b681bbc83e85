#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "event_log.hpp"
#include "petri_net.hpp"

namespace hybrid_miner {

struct VariantVerdict {
  Trace trace;  // projected onto the net's transitions
  std::uint64_t count = 0;
  bool fits = false;
};

struct PrecisionResult {
  double value = 0;
  std::uint64_t enabled = 0;   // weighted enabled transitions over all visited states
  std::uint64_t escaping = 0;  // of which never observed after that prefix in the log
};

struct QualityReport {
  double fitness_trace = 0;
  double precision_escaping = 0;
  std::vector<VariantVerdict> verdicts;
  // Weighted number of traces each place (by index) fails to replay.
  std::vector<std::uint64_t> place_violations;
  std::uint64_t fitting_cases = 0;
  std::uint64_t total_cases = 0;
  PrecisionResult precision;
};

// The log over the net's vocabulary, restricted to the net's transitions.
// Activities filtered out of the model (t_freq) are projected away.
inline EventLog align_log(const HybridSystemNet& hsn, const EventLog& log) {
  const auto& net_vocab = hsn.net().vocabulary();
  EventLog rebound = [&] {
    if (net_vocab == log.vocabulary()) return log;
    if (net_vocab->extends(*log.vocabulary())) return log.with_vocabulary(net_vocab);
    if (log.vocabulary()->extends(*net_vocab)) return log;
    throw ModelError("net and log use incompatible activity vocabularies");
  }();
  ActivitySet keep = hsn.net().transitions();
  keep.insert(kStart);
  keep.insert(kEnd);
  if (keep.includes(rebound.alphabet())) return rebound;
  return project(rebound, keep);
}

inline std::vector<VariantVerdict> classify(const HybridSystemNet& hsn, const EventLog& log) {
  EventLog aligned = align_log(hsn, log);
  std::vector<VariantVerdict> out;
  out.reserve(aligned.variants().size());
  for (const auto& v : aligned.variants()) out.push_back({v.trace, v.count, in_behavior(hsn, v.trace)});
  return out;
}

inline double fitness(const HybridSystemNet& hsn, const EventLog& log) {
  std::uint64_t fitting = 0, total = 0;
  for (const auto& v : classify(hsn, log)) {
    total += v.count;
    if (v.fits) fitting += v.count;
  }
  return total ? static_cast<double>(fitting) / static_cast<double>(total) : 0.0;
}

namespace detail {

// Activities observed directly after each prefix of the log's variants.
inline std::map<Trace, ActivitySet> prefix_continuations(const EventLog& log) {
  std::map<Trace, ActivitySet> next;
  for (const auto& v : log.variants()) {
    Trace prefix;
    for (ActivityId a : v.trace) {
      next[prefix].insert(a);
      prefix.push_back(a);
    }
  }
  return next;
}

inline PrecisionResult escaping_edges(const HybridSystemNet& hsn, const EventLog& aligned,
                                      const std::vector<VariantVerdict>& verdicts) {
  const PetriNet& net = hsn.net();
  auto continuations = prefix_continuations(aligned);
  PrecisionResult r;
  for (const auto& v : verdicts) {
    if (!v.fits) continue;
    Marking m = hsn.initial_marking();
    Trace prefix;
    for (ActivityId a : v.trace) {
      const ActivitySet& observed = continuations.at(prefix);
      for (ActivityId t : net.transitions()) {
        if (!enabled(net, m, t)) continue;
        r.enabled += v.count;
        if (!observed.contains(t)) r.escaping += v.count;
      }
      m = fire(net, m, a);
      prefix.push_back(a);
    }
  }
  r.value = r.enabled ? 1.0 - static_cast<double>(r.escaping) / static_cast<double>(r.enabled) : 0.0;
  return r;
}

}  // namespace detail

// 1 - escaping / enabled, over the states before each event of every
// fitting variant. Transitions without input places count as enabled
// everywhere.
inline PrecisionResult precision_escaping_edges(const HybridSystemNet& hsn, const EventLog& log) {
  EventLog aligned = align_log(hsn, log);
  std::vector<VariantVerdict> verdicts;
  for (const auto& v : aligned.variants()) verdicts.push_back({v.trace, v.count, in_behavior(hsn, v.trace)});
  return detail::escaping_edges(hsn, aligned, verdicts);
}

inline QualityReport evaluate_quality(const HybridSystemNet& hsn, const EventLog& log, bool with_precision = true) {
  EventLog aligned = align_log(hsn, log);
  QualityReport q;
  q.place_violations.assign(hsn.net().places().size(), 0);
  for (const auto& v : aligned.variants()) {
    require_transitions(hsn.net(), v.trace);
    bool fits = true;
    for (std::size_t p = 0; p < hsn.net().places().size(); ++p) {
      if (!place_replays(hsn, p, v.trace)) {
        fits = false;
        q.place_violations[p] += v.count;
      }
    }
    q.verdicts.push_back({v.trace, v.count, fits});
    q.total_cases += v.count;
    if (fits) q.fitting_cases += v.count;
  }
  q.fitness_trace = q.total_cases ? static_cast<double>(q.fitting_cases) / static_cast<double>(q.total_cases) : 0.0;
  if (with_precision) {
    q.precision = detail::escaping_edges(hsn, aligned, q.verdicts);
    q.precision_escaping = q.precision.value;
  }
  return q;
}

}  // namespace hybrid_miner
