#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>

#include "causal_graph.hpp"
#include "log_io.hpp"
#include "place_discovery.hpp"
#include "serialization.hpp"

namespace hybrid_miner {

// One uploaded log with its derived counters. The log never changes; the
// per-t_freq projections are a cache that can be rebuilt at any time.
class Session {
 public:
  Session(std::string id, EventLog log)
      : id_(std::move(id)), log_(std::move(log)), table_(log_), last_params_(Json::object()) {}

  const std::string& id() const noexcept { return id_; }
  const EventLog& log() const noexcept { return log_; }
  const DirectlyFollowsTable& table() const noexcept { return table_; }

  std::shared_ptr<const FrequencyProjection> projection(std::uint64_t t_freq) const {
    {
      std::shared_lock lock(mutex_);
      if (auto it = projections_.find(t_freq); it != projections_.end()) return it->second;
    }
    // Computed outside the lock; a concurrent duplicate is harmless.
    auto fresh = std::make_shared<const FrequencyProjection>(project_frequent(log_, table_, t_freq));
    std::unique_lock lock(mutex_);
    return projections_.emplace(t_freq, std::move(fresh)).first->second;
  }

  std::size_t cached_projections() const {
    std::shared_lock lock(mutex_);
    return projections_.size();
  }

  Json last_params() const {
    std::shared_lock lock(mutex_);
    return last_params_;
  }
  void remember_params(Json params) {
    std::unique_lock lock(mutex_);
    last_params_ = std::move(params);
  }

 private:
  std::string id_;
  EventLog log_;
  DirectlyFollowsTable table_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::uint64_t, std::shared_ptr<const FrequencyProjection>> projections_;
  Json last_params_;
};

// In-memory sessions, optionally mirrored to a directory: every uploaded log
// is stored as <id>.json and reloaded on startup.
class SessionStore {
 public:
  explicit SessionStore(std::optional<std::filesystem::path> data_dir = std::nullopt)
      : data_dir_(std::move(data_dir)), rng_(std::random_device{}()) {
    if (data_dir_) load_directory();
  }

  std::shared_ptr<Session> create(EventLog log) {
    std::unique_lock lock(mutex_);
    std::string id;
    do id = fresh_id();
    while (sessions_.count(id));
    auto session = std::make_shared<Session>(id, std::move(log));
    if (data_dir_) {
      std::ofstream out(*data_dir_ / (id + ".json"));
      out << log_to_json(session->log()).dump();
      if (!out) throw Error("cannot persist session '" + id + "'");
    }
    sessions_.emplace(id, session);
    return session;
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  bool erase(const std::string& id) {
    std::unique_lock lock(mutex_);
    if (!sessions_.erase(id)) return false;
    if (data_dir_) std::filesystem::remove(*data_dir_ / (id + ".json"));
    return true;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return sessions_.size();
  }

 private:
  std::string fresh_id() {
    static constexpr char hex[] = "0123456789abcdef";
    std::string id(16, '0');
    for (char& c : id) c = hex[rng_() & 15u];
    return id;
  }

  void load_directory() {
    std::filesystem::create_directories(*data_dir_);
    for (const auto& entry : std::filesystem::directory_iterator(*data_dir_)) {
      if (entry.path().extension() != ".json") continue;
      try {
        auto log = read_log_text(read_file(entry.path().string()), {LogFormat::json, {}, {}});
        std::string id = entry.path().stem().string();
        sessions_.emplace(id, std::make_shared<Session>(id, std::move(log)));
      } catch (const Error&) {
        // A damaged file only loses that session.
      }
    }
  }

  std::optional<std::filesystem::path> data_dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mt19937_64 rng_;
};

}  // namespace hybrid_miner
