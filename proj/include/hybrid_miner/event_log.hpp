#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "activity.hpp"
#include "errors.hpp"

namespace hybrid_miner {

using Trace = std::vector<ActivityId>;

struct Variant {
  Trace trace;
  std::uint64_t count = 0;

  friend bool operator==(const Variant&, const Variant&) = default;
};

// ⟨▷, a1, ..., an, □⟩ with no endpoint activity in between.
inline bool has_endpoint_structure(std::span<const ActivityId> trace) {
  if (trace.size() < 2 || trace.front() != kStart || trace.back() != kEnd) return false;
  return std::none_of(trace.begin() + 1, trace.end() - 1,
                      [](ActivityId a) { return a == kStart || a == kEnd; });
}

// A multiset of traces stored as distinct variants with multiplicities.
// Immutable after construction; every instance satisfies the start/end
// structure, is non-empty, and has an alphabet covering all its traces.
class EventLog {
 public:
  // Identical traces are merged; variant order is first occurrence.
  // `alphabet` defaults to the activities that occur (plus ▷ and □).
  EventLog(VocabularyPtr vocabulary, std::vector<Variant> variants,
           std::optional<ActivitySet> alphabet = std::nullopt)
      : vocabulary_(std::move(vocabulary)) {
    if (!vocabulary_) throw LogError("event log without vocabulary");
    std::map<Trace, std::size_t> seen;
    for (auto& v : variants) {
      if (v.count == 0) continue;
      if (!has_endpoint_structure(v.trace))
        throw LogError("trace does not have the form <start, ..., end>");
      for (ActivityId a : v.trace)
        if (a.value >= vocabulary_->size()) throw LogError("trace references an activity outside the vocabulary");
      auto [it, inserted] = seen.emplace(v.trace, variants_.size());
      if (inserted)
        variants_.push_back(std::move(v));
      else
        variants_[it->second].count += v.count;
    }
    if (variants_.empty()) throw LogError("empty log");

    ActivitySet occurring{kStart, kEnd};
    for (const auto& v : variants_)
      for (ActivityId a : v.trace) occurring.insert(a);
    if (alphabet) {
      alphabet->insert(kStart);
      alphabet->insert(kEnd);
      if (!alphabet->includes(occurring)) throw LogError("alphabet does not cover every activity in the log");
      alphabet_ = std::move(*alphabet);
    } else {
      alphabet_ = std::move(occurring);
    }
    for (const auto& v : variants_) {
      cases_ += v.count;
      events_ += v.count * v.trace.size();
    }
  }

  const VocabularyPtr& vocabulary() const noexcept { return vocabulary_; }
  const std::string& name(ActivityId a) const { return vocabulary_->name(a); }
  const ActivitySet& alphabet() const noexcept { return alphabet_; }
  const std::vector<Variant>& variants() const noexcept { return variants_; }

  std::uint64_t case_count() const noexcept { return cases_; }
  // Including the ▷/□ events.
  std::uint64_t event_count() const noexcept { return events_; }
  std::uint64_t raw_event_count() const noexcept { return events_ - 2 * cases_; }

  // Same log over a vocabulary that extends the current one.
  EventLog with_vocabulary(VocabularyPtr vocabulary) const {
    if (!vocabulary || !vocabulary->extends(*vocabulary_))
      throw LogError("vocabulary does not extend the log's vocabulary");
    EventLog copy = *this;
    copy.vocabulary_ = std::move(vocabulary);
    return copy;
  }

  // Multiset equality by label, independent of id assignment and variant order.
  friend bool operator==(const EventLog& a, const EventLog& b) { return a.canonical() == b.canonical(); }

 private:
  using Canonical = std::pair<std::vector<std::string>, std::vector<std::pair<std::vector<std::string>, std::uint64_t>>>;

  Canonical canonical() const {
    Canonical out;
    for (ActivityId a : alphabet_) out.first.push_back(name(a));
    std::sort(out.first.begin(), out.first.end());
    for (const auto& v : variants_) {
      std::vector<std::string> labels;
      labels.reserve(v.trace.size());
      for (ActivityId a : v.trace) labels.push_back(name(a));
      out.second.emplace_back(std::move(labels), v.count);
    }
    std::sort(out.second.begin(), out.second.end());
    return out;
  }

  VocabularyPtr vocabulary_;
  ActivitySet alphabet_;
  std::vector<Variant> variants_;
  std::uint64_t cases_ = 0;
  std::uint64_t events_ = 0;
};

// Wrap every raw trace as ⟨▷⟩·raw·⟨□⟩. A raw trace that already has the
// full endpoint structure passes through unchanged; any other placement of
// a reserved activity is rejected.
inline EventLog augment_endpoints(VocabularyPtr vocabulary, std::vector<Variant> raw,
                                  std::optional<ActivitySet> alphabet = std::nullopt) {
  for (auto& v : raw) {
    bool has_reserved = std::any_of(v.trace.begin(), v.trace.end(),
                                    [](ActivityId a) { return a == kStart || a == kEnd; });
    if (!has_reserved) {
      v.trace.insert(v.trace.begin(), kStart);
      v.trace.push_back(kEnd);
    } else if (!has_endpoint_structure(v.trace)) {
      throw LogError("trace contains a start/end activity in a non-conforming position");
    }
  }
  return EventLog(std::move(vocabulary), std::move(raw), std::move(alphabet));
}

// Convenience builder from string labels; used by the readers and tests.
class LogBuilder {
 public:
  LogBuilder() : vocabulary_(std::make_shared<Vocabulary>()) {}

  LogBuilder& add(const std::vector<std::string>& labels, std::uint64_t count = 1) {
    Trace trace;
    trace.reserve(labels.size());
    for (const auto& l : labels) trace.push_back(vocabulary_->intern(l));
    raw_.push_back({std::move(trace), count});
    return *this;
  }

  LogBuilder& add(std::initializer_list<std::string_view> labels, std::uint64_t count = 1) {
    std::vector<std::string> copy(labels.begin(), labels.end());
    return add(copy, count);
  }

  ActivityId intern(std::string_view label) { return vocabulary_->intern(label); }
  LogBuilder& add_trace(Trace trace, std::uint64_t count = 1) {
    raw_.push_back({std::move(trace), count});
    return *this;
  }

  bool empty() const noexcept { return raw_.empty(); }

  EventLog build() && { return augment_endpoints(std::move(vocabulary_), std::move(raw_)); }
  EventLog build() const& { return augment_endpoints(std::make_shared<Vocabulary>(*vocabulary_), raw_); }

 private:
  std::shared_ptr<Vocabulary> vocabulary_;
  std::vector<Variant> raw_;
};

inline Trace project_trace(std::span<const ActivityId> trace, const ActivitySet& keep) {
  Trace out;
  out.reserve(trace.size());
  for (ActivityId a : trace)
    if (keep.contains(a)) out.push_back(a);
  return out;
}

// Keep only the activities in `keep` (which must contain ▷ and □); traces
// that become identical are merged.
inline EventLog project(const EventLog& log, const ActivitySet& keep) {
  if (!keep.contains(kStart) || !keep.contains(kEnd))
    throw ParameterError("keep", "projection set must contain the start and end activities");
  std::vector<bool> mask(log.vocabulary()->size(), false);
  for (ActivityId a : keep)
    if (a.value < mask.size()) mask[a.value] = true;

  std::vector<Variant> projected;
  projected.reserve(log.variants().size());
  for (const auto& v : log.variants()) {
    Trace t;
    t.reserve(v.trace.size());
    for (ActivityId a : v.trace)
      if (mask[a.value]) t.push_back(a);
    projected.push_back({std::move(t), v.count});
  }
  ActivitySet alphabet;
  for (ActivityId a : log.alphabet())
    if (keep.contains(a)) alphabet.insert(a);
  return EventLog(log.vocabulary(), std::move(projected), std::move(alphabet));
}

}  // namespace hybrid_miner
