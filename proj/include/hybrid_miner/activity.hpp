#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace hybrid_miner {

// Interned activity label. Ids are indices into a Vocabulary.
struct ActivityId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(ActivityId, ActivityId) = default;
};

inline constexpr ActivityId kStart{0};
inline constexpr ActivityId kEnd{1};

inline constexpr std::string_view kStartLabel = "▷";
inline constexpr std::string_view kEndLabel = "□";

inline bool is_reserved_label(std::string_view label) {
  return label == kStartLabel || label == kEndLabel;
}

using ActivityPair = std::pair<ActivityId, ActivityId>;

// Label table. Ids 0 and 1 are always the start and end activities; user
// labels get consecutive ids in first-seen order. Append-only: a vocabulary
// built by `extended_with` keeps every existing id.
class Vocabulary {
 public:
  Vocabulary() {
    names_ = {std::string(kStartLabel), std::string(kEndLabel)};
    index_.emplace(names_[0], kStart);
    index_.emplace(names_[1], kEnd);
  }

  // Reserved labels map to kStart/kEnd. Callers ingesting raw data must
  // reject them beforehand (see is_reserved_label).
  ActivityId intern(std::string_view label) {
    if (auto found = find(label)) return *found;
    ActivityId id{static_cast<std::uint32_t>(names_.size())};
    names_.emplace_back(label);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<ActivityId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  ActivityId at(std::string_view label) const {
    if (auto found = find(label)) return *found;
    throw LogError("unknown activity '" + std::string(label) + "'");
  }

  const std::string& name(ActivityId id) const { return names_.at(id.value); }
  std::size_t size() const noexcept { return names_.size(); }

  std::shared_ptr<const Vocabulary> extended_with(const std::vector<std::string>& labels) const {
    auto copy = std::make_shared<Vocabulary>(*this);
    for (const auto& l : labels) copy->intern(l);
    return copy;
  }

  // True if every id of `other` denotes the same label here.
  bool extends(const Vocabulary& other) const {
    if (other.size() > size()) return false;
    return std::equal(other.names_.begin(), other.names_.end(), names_.begin());
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ActivityId> index_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

// Sorted, duplicate-free set of activities.
class ActivitySet {
 public:
  ActivitySet() = default;
  ActivitySet(std::initializer_list<ActivityId> ids) : items_(ids) { normalize(); }
  explicit ActivitySet(std::vector<ActivityId> ids) : items_(std::move(ids)) { normalize(); }

  bool contains(ActivityId id) const { return std::binary_search(items_.begin(), items_.end(), id); }
  void insert(ActivityId id) {
    auto it = std::lower_bound(items_.begin(), items_.end(), id);
    if (it == items_.end() || *it != id) items_.insert(it, id);
  }

  bool includes(const ActivitySet& other) const {
    return std::includes(items_.begin(), items_.end(), other.items_.begin(), other.items_.end());
  }

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }
  const std::vector<ActivityId>& items() const noexcept { return items_; }

  friend bool operator==(const ActivitySet&, const ActivitySet&) = default;
  friend auto operator<=>(const ActivitySet& a, const ActivitySet& b) { return a.items_ <=> b.items_; }

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  std::vector<ActivityId> items_;
};

}  // namespace hybrid_miner

template <>
struct std::hash<hybrid_miner::ActivityId> {
  std::size_t operator()(hybrid_miner::ActivityId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
