#pragma once

#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tensecon/io_formats.hpp"
#include "tensecon/sim.hpp"

namespace tensecon {

class SessionNotFound : public std::runtime_error {
 public:
  explicit SessionNotFound(const std::string& id) : std::runtime_error("no session '" + id + "'") {}
};

/// Stepping a session that already ran its configured number of steps.
class SessionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ForkOrigin {
  std::string id;
  int step = 0;
};

/// Point-in-time copy of a session, safe to read without locks.
struct SessionSnapshot {
  std::string id;
  std::string scenario_name;
  std::shared_ptr<const Scenario> scenario;
  int step = 0;
  std::vector<IndicatorFrame> history;
  std::optional<ForkOrigin> parent;
};

/// In-memory simulation sessions with LRU eviction.
///
/// Each session steps the scenario's own schedule and shocks; caller
/// interventions are applied after the scheduled ones, and caller feedback
/// replaces scheduled feedback. The caller inputs are logged so a fork can
/// replay them.
///
/// Thread-safe. Operations on one session are serialized by its own mutex;
/// the registry takes a shared lock for lookup and an exclusive lock for
/// insert and evict.
class SessionStore {
 public:
  explicit SessionStore(std::size_t capacity = 256);

  SessionSnapshot create(std::shared_ptr<const Scenario> scenario, std::string scenario_name);

  /// Throws SessionNotFound, SessionExhausted, or ValidationError for a
  /// malformed intervention (the session is left unchanged).
  IndicatorFrame step(const std::string& id, const StepInput& input);

  /// New session replaying the first `at_step` logged steps of `id`.
  /// Throws SessionNotFound, or InvalidArgument when at_step is outside
  /// [0, history length].
  SessionSnapshot fork(const std::string& id, int at_step);

  SessionSnapshot snapshot(const std::string& id);

  std::size_t size() const;
  std::size_t capacity() const noexcept { return capacity_; }

 private:
  struct Session {
    std::string id;
    std::string scenario_name;
    std::shared_ptr<const Scenario> scenario;
    std::optional<ForkOrigin> parent;

    std::mutex mu;
    EconomyState state;
    std::vector<IndicatorFrame> history;
    std::vector<StepInput> log;
  };

  std::shared_ptr<Session> find(const std::string& id);
  std::shared_ptr<Session> insert(std::shared_ptr<Session> s);
  std::string next_id();
  static IndicatorFrame advance(Session& s, const StepInput& input);
  static SessionSnapshot snapshot_locked(const Session& s);

  std::size_t capacity_;
  mutable std::shared_mutex registry_mu_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;

  std::mutex lru_mu_;
  std::list<std::string> lru_;  // most recent first
  std::unordered_map<std::string, std::list<std::string>::iterator> lru_pos_;

  std::mutex id_mu_;
  std::uint64_t id_counter_;
};

}  // namespace tensecon
