#include "tensecon/session_store.hpp"

#include <cstdio>
#include <random>

#include "tensecon/error.hpp"
#include "tensecon/rng.hpp"

namespace tensecon {

SessionStore::SessionStore(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw InvalidArgument("session capacity must be >= 1");
  std::random_device rd;
  id_counter_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string SessionStore::next_id() {
  std::uint64_t n;
  {
    std::lock_guard lock(id_mu_);
    n = id_counter_++;
  }
  // SplitMix64's output function is a bijection, so distinct counters give
  // distinct ids.
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(SplitMix64(n).next()));
  return buf;
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) {
  std::shared_ptr<Session> s;
  {
    std::shared_lock lock(registry_mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw SessionNotFound(id);
    s = it->second;
  }
  std::lock_guard lock(lru_mu_);
  if (const auto pos = lru_pos_.find(id); pos != lru_pos_.end()) {
    lru_.splice(lru_.begin(), lru_, pos->second);
  }
  return s;
}

std::shared_ptr<SessionStore::Session> SessionStore::insert(std::shared_ptr<Session> s) {
  std::unique_lock lock(registry_mu_);
  std::lock_guard lru_lock(lru_mu_);
  while (sessions_.size() >= capacity_ && !lru_.empty()) {
    const std::string victim = lru_.back();
    lru_.pop_back();
    lru_pos_.erase(victim);
    sessions_.erase(victim);
  }
  sessions_.emplace(s->id, s);
  lru_.push_front(s->id);
  lru_pos_[s->id] = lru_.begin();
  return s;
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(registry_mu_);
  return sessions_.size();
}

SessionSnapshot SessionStore::snapshot_locked(const Session& s) {
  return {s.id, s.scenario_name, s.scenario, s.state.step, s.history, s.parent};
}

SessionSnapshot SessionStore::create(std::shared_ptr<const Scenario> scenario,
                                     std::string scenario_name) {
  auto s = std::make_shared<Session>();
  s->id = next_id();
  s->scenario_name = std::move(scenario_name);
  s->state = init_state(scenario->config);
  s->scenario = std::move(scenario);
  SessionSnapshot snap = snapshot_locked(*s);
  insert(std::move(s));
  return snap;
}

IndicatorFrame SessionStore::advance(Session& s, const StepInput& input) {
  const Scenario& sc = *s.scenario;
  if (s.state.step >= sc.config.steps) {
    throw SessionExhausted("session '" + s.id + "' already ran its " +
                           std::to_string(sc.config.steps) + " steps");
  }
  for (const auto& a : input.actions) a.validate(sc.config.taxonomy);

  StepInput merged;
  if (const auto it = sc.schedule.find(s.state.step); it != sc.schedule.end()) merged = it->second;
  merged.actions.insert(merged.actions.end(), input.actions.begin(), input.actions.end());
  if (input.feedback) merged.feedback = input.feedback;

  auto [next, frame] = tensecon::step(sc.config, s.state, merged.actions, merged.feedback, sc.shocks);
  s.state = std::move(next);
  s.history.push_back(frame);
  s.log.push_back(input);
  return frame;
}

IndicatorFrame SessionStore::step(const std::string& id, const StepInput& input) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return advance(*s, input);
}

SessionSnapshot SessionStore::fork(const std::string& id, int at_step) {
  auto parent = find(id);
  auto child = std::make_shared<Session>();
  {
    std::lock_guard lock(parent->mu);
    if (at_step < 0 || static_cast<std::size_t>(at_step) > parent->history.size()) {
      throw InvalidArgument("fork step " + std::to_string(at_step) + " outside [0, " +
                            std::to_string(parent->history.size()) + "]");
    }
    child->scenario = parent->scenario;
    child->scenario_name = parent->scenario_name;
    child->log.assign(parent->log.begin(), parent->log.begin() + at_step);
  }
  child->id = next_id();
  child->parent = ForkOrigin{id, at_step};
  child->state = init_state(child->scenario->config);
  const std::vector<StepInput> replay = std::move(child->log);
  child->log.clear();
  for (const auto& in : replay) advance(*child, in);
  SessionSnapshot snap = snapshot_locked(*child);
  insert(std::move(child));
  return snap;
}

SessionSnapshot SessionStore::snapshot(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return snapshot_locked(*s);
}

}  // namespace tensecon
