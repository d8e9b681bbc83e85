#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "event_log.hpp"

namespace hybrid_miner {

enum class Rel1Numerator {
  literal,    // #(a,b) + #(a,b)
  symmetric,  // #(a,b) + #(b,a), clamped to 1
};

struct CausalityParams {
  double c = 1.0;
  double w = 0.5;
  Rel1Numerator rel1_numerator = Rel1Numerator::literal;

  void validate() const {
    std::vector<FieldError> errors;
    if (!(c > 0)) errors.push_back({"c", "must be > 0"});
    if (!(w >= 0 && w <= 1)) errors.push_back({"w", "must lie in [0,1]"});
    if (!errors.empty()) throw ParameterError(std::move(errors));
  }
};

// Directly-follows counters of a log, weighted by variant multiplicity.
// Dense over the vocabulary; ids outside the log's alphabet stay zero.
class DirectlyFollowsTable {
 public:
  explicit DirectlyFollowsTable(const EventLog& log)
      : vocabulary_(log.vocabulary()), n_(log.vocabulary()->size()),
        occurrences_(n_, 0), follows_(n_ * n_, 0), successors_(n_, 0), predecessors_(n_, 0) {
    for (const auto& v : log.variants()) {
      const auto& t = v.trace;
      for (std::size_t i = 0; i < t.size(); ++i) {
        occurrences_[t[i].value] += v.count;
        if (i + 1 < t.size()) {
          follows_[t[i].value * n_ + t[i + 1].value] += v.count;
          successors_[t[i].value] += v.count;
          predecessors_[t[i + 1].value] += v.count;
        }
      }
    }
  }

  const VocabularyPtr& vocabulary() const noexcept { return vocabulary_; }

  // #(a,L)
  std::uint64_t count(ActivityId a) const { return a.value < n_ ? occurrences_[a.value] : 0; }
  // #(X,L)
  std::uint64_t count(const ActivitySet& xs) const {
    std::uint64_t total = 0;
    for (ActivityId a : xs) total += count(a);
    return total;
  }
  // #(a,b,L)
  std::uint64_t follows(ActivityId a, ActivityId b) const {
    return a.value < n_ && b.value < n_ ? follows_[a.value * n_ + b.value] : 0;
  }
  // #(a,*,L)
  std::uint64_t successors(ActivityId a) const { return a.value < n_ ? successors_[a.value] : 0; }
  // #(*,b,L)
  std::uint64_t predecessors(ActivityId b) const { return b.value < n_ ? predecessors_[b.value] : 0; }

 private:
  VocabularyPtr vocabulary_;
  std::size_t n_;
  std::vector<std::uint64_t> occurrences_;
  std::vector<std::uint64_t> follows_;
  std::vector<std::uint64_t> successors_;
  std::vector<std::uint64_t> predecessors_;
};

inline DirectlyFollowsTable build_table(const EventLog& log) { return DirectlyFollowsTable(log); }

// Strength relative to the split/join behaviour of a and b; 0 when neither
// has any adjacency.
inline double rel1(const DirectlyFollowsTable& table, ActivityId a, ActivityId b,
                   Rel1Numerator numerator = Rel1Numerator::literal) {
  double denominator = static_cast<double>(table.successors(a)) + static_cast<double>(table.predecessors(b));
  if (denominator == 0) return 0.0;
  double ab = static_cast<double>(table.follows(a, b));
  double top = numerator == Rel1Numerator::literal ? ab + ab : ab + static_cast<double>(table.follows(b, a));
  return std::min(1.0, top / denominator);
}

// Concurrency- and loop-aware strength; negative differences map to 0.
inline double rel2(const DirectlyFollowsTable& table, ActivityId a, ActivityId b, double c) {
  double ab = static_cast<double>(table.follows(a, b));
  if (a == b) return ab / (ab + c);
  double ba = static_cast<double>(table.follows(b, a));
  if (ab - ba > 0) return (ab - ba) / (ab + ba + c);
  return 0.0;
}

inline double causality(const DirectlyFollowsTable& table, ActivityId a, ActivityId b, const CausalityParams& p) {
  return p.w * rel1(table, a, b, p.rel1_numerator) + (1 - p.w) * rel2(table, a, b, p.c);
}

}  // namespace hybrid_miner
