// Copyright 2026 The iss-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <set>
#include <vector>

#include "iss/types.hpp"

namespace iss::fd {

enum class Kind { Suspect, Restore };

struct Event {
  Kind kind;
  NodeId node;
  friend bool operator==(const Event&, const Event&) = default;
};

/// Eventually strong failure detector driven by heartbeats. Timers live in
/// the host; the detector tracks per-peer timeouts and the suspect list.
/// A timer expiry doubles that peer's timeout, so after GST every correct
/// peer's timeout eventually exceeds the heartbeat period plus delay.
class FailureDetector {
 public:
  FailureDetector(NodeId self, std::size_t n, SimTime initial_timeout);

  /// A heartbeat from p arrived; the host restarts p's timer with timeout(p).
  std::vector<Event> on_heartbeat(NodeId p);
  /// p's timer fired; the host restarts it with the (doubled) timeout(p).
  std::vector<Event> on_timer_expiry(NodeId p);

  SimTime timeout(NodeId p) const { return timeouts_.at(p); }
  bool suspects(NodeId p) const { return suspected_.count(p) != 0; }
  const std::set<NodeId>& suspected() const { return suspected_; }
  NodeId self() const { return self_; }
  std::size_t size() const { return timeouts_.size(); }

 private:
  NodeId self_;
  std::vector<SimTime> timeouts_;
  std::set<NodeId> suspected_;
};

}  // namespace iss::fd
