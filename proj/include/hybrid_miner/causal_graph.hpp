#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "event_log.hpp"
#include "log_stats.hpp"

namespace hybrid_miner {

struct GraphParams {
  std::uint64_t t_freq = 1;
  CausalityParams causality;
  double t_rs = 0.8;
  double t_rw = 0.75;

  void validate() const {
    std::vector<FieldError> errors;
    if (t_freq < 1) errors.push_back({"t_freq", "must be a positive integer"});
    if (!(causality.c > 0)) errors.push_back({"c", "must be > 0"});
    if (!(causality.w >= 0 && causality.w <= 1)) errors.push_back({"w", "must lie in [0,1]"});
    if (!(t_rs >= 0 && t_rs <= 1)) errors.push_back({"t_rs", "must lie in [0,1]"});
    if (!(t_rw >= 0 && t_rw <= 1)) errors.push_back({"t_rw", "must lie in [0,1]"});
    if (t_rs < t_rw) errors.push_back({"t_rs", "must be >= t_rw"});
    if (!errors.empty()) throw ParameterError(std::move(errors));
  }
};

// Activities plus disjoint strong and weak causal relations over them.
class CausalGraph {
 public:
  CausalGraph(VocabularyPtr vocabulary, ActivitySet activities, std::set<ActivityPair> strong,
              std::set<ActivityPair> weak, std::map<ActivityPair, double> strength = {})
      : vocabulary_(std::move(vocabulary)), activities_(std::move(activities)), strong_(std::move(strong)),
        weak_(std::move(weak)), strength_(std::move(strength)) {
    activities_.insert(kStart);
    activities_.insert(kEnd);
    for (const auto& rel : {&strong_, &weak_})
      for (const auto& [a, b] : *rel)
        if (!activities_.contains(a) || !activities_.contains(b))
          throw LogError("causal relation references an activity outside the graph");
    for (const auto& p : strong_)
      if (weak_.count(p)) throw LogError("strong and weak causal relations overlap");
  }

  const VocabularyPtr& vocabulary() const noexcept { return vocabulary_; }
  const ActivitySet& activities() const noexcept { return activities_; }
  const std::set<ActivityPair>& strong() const noexcept { return strong_; }
  const std::set<ActivityPair>& weak() const noexcept { return weak_; }
  // Caus value of each related pair, when the graph was discovered.
  const std::map<ActivityPair, double>& strength() const noexcept { return strength_; }
  const std::string& name(ActivityId a) const { return vocabulary_->name(a); }

  friend bool operator==(const CausalGraph& a, const CausalGraph& b) {
    return a.activities_ == b.activities_ && a.strong_ == b.strong_ && a.weak_ == b.weak_;
  }

 private:
  VocabularyPtr vocabulary_;
  ActivitySet activities_;
  std::set<ActivityPair> strong_;
  std::set<ActivityPair> weak_;
  std::map<ActivityPair, double> strength_;
};

// {a | #(a,L) >= t_freq} ∪ {▷, □}
inline ActivitySet frequent_activities(const EventLog& log, const DirectlyFollowsTable& table, std::uint64_t t_freq) {
  ActivitySet keep{kStart, kEnd};
  for (ActivityId a : log.alphabet())
    if (table.count(a) >= t_freq) keep.insert(a);
  return keep;
}

// The log restricted to the frequent activities, with its counters. Depends
// only on t_freq, so callers can reuse it across threshold changes.
struct FrequencyProjection {
  std::uint64_t t_freq;
  ActivitySet activities;
  EventLog log;
  DirectlyFollowsTable table;
};

inline FrequencyProjection project_frequent(const EventLog& log, const DirectlyFollowsTable& full_table,
                                            std::uint64_t t_freq) {
  ActivitySet keep = frequent_activities(log, full_table, t_freq);
  EventLog projected = project(log, keep);
  DirectlyFollowsTable table(projected);
  return FrequencyProjection{t_freq, std::move(keep), std::move(projected), std::move(table)};
}

inline FrequencyProjection project_frequent(const EventLog& log, std::uint64_t t_freq) {
  return project_frequent(log, DirectlyFollowsTable(log), t_freq);
}

// Threshold classification of Caus over A'×A' (self-pairs included).
inline CausalGraph classify_relations(const FrequencyProjection& projection, const GraphParams& params) {
  params.validate();
  std::set<ActivityPair> strong, weak;
  std::map<ActivityPair, double> strength;
  for (ActivityId a : projection.activities) {
    for (ActivityId b : projection.activities) {
      double caus = causality(projection.table, a, b, params.causality);
      if (caus >= params.t_rs) {
        strong.emplace(a, b);
        strength.emplace(ActivityPair{a, b}, caus);
      } else if (caus >= params.t_rw) {
        weak.emplace(a, b);
        strength.emplace(ActivityPair{a, b}, caus);
      }
    }
  }
  return CausalGraph(projection.log.vocabulary(), projection.activities, std::move(strong), std::move(weak),
                     std::move(strength));
}

inline CausalGraph discover_causal_graph(const EventLog& log, const GraphParams& params) {
  params.validate();
  return classify_relations(project_frequent(log, params.t_freq), params);
}

}  // namespace hybrid_miner
