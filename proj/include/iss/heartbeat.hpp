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

#include <functional>
#include <map>
#include <optional>
#include <set>

#include "iss/config.hpp"
#include "iss/fd.hpp"
#include "iss/sim.hpp"

namespace iss::fd {

/// Runs a node's failure detector: periodic heartbeats to every peer and a
/// per-peer expiry timer. Heartbeats are either sent directly or diffused
/// through reliable broadcast.
class Monitor {
 public:
  using Listener = std::function<void(const Event&)>;

  Monitor(NodeId self, const NodeConfig& config, sim::Simulator& sim, sim::Network& net,
          Listener listener);

  void start();
  void on_heartbeat(NodeId from, const HeartbeatMsg& m);
  void on_brb_heartbeat(NodeId from, const BrbHeartbeatMsg& m);

  const FailureDetector& detector() const { return fd_; }

 private:
  struct Diffusion {
    std::set<NodeId> echoes;
    std::set<NodeId> readies;
    bool echoed = false;
    bool readied = false;
  };

  void tick();
  void arm(NodeId p);
  void heard(NodeId p);
  void emit(const std::vector<Event>& events);
  void send_all(const BrbHeartbeatMsg& m);

  NodeId self_;
  const NodeConfig& config_;
  sim::Simulator& sim_;
  sim::Network& net_;
  Listener listener_;
  FailureDetector fd_;
  std::vector<std::optional<sim::TimerId>> timers_;
  std::uint64_t seq_ = 0;
  std::map<std::pair<NodeId, std::uint64_t>, Diffusion> diffusions_;
  std::vector<std::uint64_t> delivered_upto_;
};

}  // namespace iss::fd
