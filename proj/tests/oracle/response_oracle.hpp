#pragma once

// Brute-force transcription of the node classification rules, written
// without reference to src/response.cpp. Used by the unit and acceptance
// suites to cross-check transition().

#include <cstdint>
#include <deque>
#include <optional>
#include <set>

#include "wsnids/response.hpp"

namespace oracle {

using wsnids::Action;
using wsnids::NodeClass;
using wsnids::ResponseParams;
using wsnids::Tick;

/// Abstract input tuple for exhaustive enumeration.
struct Tuple {
  NodeClass cls;
  bool misbehaving;
  // Fresh: probation; Member: unused; Unstable: unstable_ticks on a good
  // verdict, misbehave limit on a bad one; Suspect: 0 = still banned,
  // 1 = ban over but reobservation short, 2 = both over.
  int timer;
  std::uint32_t oscillations;  // in-window Member->Unstable entries
};

struct Expected {
  NodeClass cls;
  std::set<Action> actions;
};

inline Expected expected(const Tuple& in, std::uint32_t limit) {
  const std::set<Action> red{Action::EmitRedAlert, Action::Quarantine};
  switch (in.cls) {
    case NodeClass::Malicious:
      return {NodeClass::Malicious, {}};
    case NodeClass::Fresh:
      if (in.misbehaving) return {NodeClass::Suspect, red};
      if (in.timer) return {NodeClass::Member, {}};
      return {NodeClass::Fresh, {}};
    case NodeClass::Member:
      if (in.misbehaving) return {NodeClass::Unstable, {}};
      return {NodeClass::Member, {}};
    case NodeClass::Unstable:
      if (in.oscillations >= limit) return {NodeClass::Suspect, red};
      if (in.timer) {
        return in.misbehaving ? Expected{NodeClass::Suspect, red}
                              : Expected{NodeClass::Member, {}};
      }
      return {NodeClass::Unstable, {}};
    case NodeClass::Suspect:
      if (in.timer == 0) return {NodeClass::Suspect, {}};
      if (in.misbehaving) return {NodeClass::Malicious, {Action::PermanentBan}};
      if (in.timer == 2) return {NodeClass::Unstable, {Action::Reconnect}};
      return {NodeClass::Suspect, {}};
  }
  return {in.cls, {}};
}

/// Stateful reference machine driven by a verdict sequence.
class Machine {
 public:
  Machine(const ResponseParams& p, Tick start) : p_(p), since_(start) {}

  NodeClass cls() const { return cls_; }
  int red_alerts() const { return red_alerts_; }

  void observe(bool bad, Tick now) {
    switch (cls_) {
      case NodeClass::Malicious:
        return;
      case NodeClass::Fresh:
        if (bad) {
          suspect(now);
        } else if (now - since_ >= p_.probation_ticks) {
          cls_ = NodeClass::Member;
          since_ = now;
        }
        return;
      case NodeClass::Member:
        if (bad) {
          cls_ = NodeClass::Unstable;
          since_ = now;
          expire(now);
          flips_.push_back(now);
          bad_run_ = now;
          last_bad_ = now;
        }
        return;
      case NodeClass::Unstable:
        expire(now);
        if (flips_.size() >= p_.oscillation_limit) {
          suspect(now);
          return;
        }
        if (bad) {
          if (!bad_run_) bad_run_ = now;
          last_bad_ = now;
          if (now - *bad_run_ >= p_.misbehave_limit_ticks) suspect(now);
          return;
        }
        bad_run_.reset();
        if (now - last_bad_ >= p_.unstable_ticks) {
          cls_ = NodeClass::Member;
          since_ = now;
        }
        return;
      case NodeClass::Suspect:
        if (now <= ban_end_) return;
        if (bad) {
          cls_ = NodeClass::Malicious;
          since_ = now;
          return;
        }
        if (now - ban_end_ >= p_.reobserve_ticks) {
          cls_ = NodeClass::Unstable;
          since_ = now;
          last_bad_ = now;
          bad_run_.reset();
          flips_.clear();
        }
        return;
    }
  }

 private:
  void suspect(Tick now) {
    cls_ = NodeClass::Suspect;
    since_ = now;
    ban_end_ = now + p_.ban_ticks;
    flips_.clear();
    bad_run_.reset();
    ++red_alerts_;
  }
  void expire(Tick now) {
    while (!flips_.empty() && now - flips_.front() >= p_.oscillation_window) {
      flips_.pop_front();
    }
  }

  ResponseParams p_;
  NodeClass cls_ = NodeClass::Fresh;
  Tick since_;
  Tick ban_end_ = 0;
  Tick last_bad_ = 0;
  std::optional<Tick> bad_run_;
  std::deque<Tick> flips_;
  int red_alerts_ = 0;
};

/// Concrete state realizing a tuple at tick `now` under `p`.
inline wsnids::NodeClassState realize(const Tuple& in, wsnids::NodeId node, Tick now,
                                      const ResponseParams& p) {
  wsnids::NodeClassState s;
  s.node = node;
  s.cls = in.cls;
  for (std::uint32_t i = 0; i < in.oscillations; ++i) s.oscillations.push_back(now - 1 - i);
  switch (in.cls) {
    case NodeClass::Fresh:
      s.entered_at = in.timer ? now - p.probation_ticks : now - p.probation_ticks + 1;
      break;
    case NodeClass::Member:
      s.entered_at = now - 1;
      break;
    case NodeClass::Unstable: {
      s.entered_at = now - 1;
      if (in.misbehaving) {
        const Tick run = in.timer ? p.misbehave_limit_ticks : p.misbehave_limit_ticks - 1;
        s.misbehave_since = now - run;
        s.last_misbehave = now - 1;
      } else {
        const Tick quiet = in.timer ? p.unstable_ticks : p.unstable_ticks - 1;
        s.last_misbehave = now - quiet;
      }
      break;
    }
    case NodeClass::Suspect: {
      s.oscillations.clear();
      Tick until = now;
      if (in.timer == 1) until = now - 1;
      if (in.timer == 2) until = now - p.reobserve_ticks;
      if (in.timer == 1 && p.reobserve_ticks <= 1) until = now;  // cannot realize
      s.banned_until = until;
      s.entered_at = until - p.ban_ticks;
      break;
    }
    case NodeClass::Malicious:
      s.entered_at = now - 1;
      break;
  }
  return s;
}

}  // namespace oracle
