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

#include "iss/heartbeat.hpp"

namespace iss::fd {

Monitor::Monitor(NodeId self, const NodeConfig& config, sim::Simulator& sim, sim::Network& net,
                 Listener listener)
    : self_(self),
      config_(config),
      sim_(sim),
      net_(net),
      listener_(std::move(listener)),
      fd_(self, config.n, config.detector_timeout()),
      timers_(config.n),
      delivered_upto_(config.n, 0) {}

void Monitor::start() {
  for (NodeId p = 0; p < config_.n; ++p) {
    if (p != self_) arm(p);
  }
  tick();
}

void Monitor::tick() {
  ++seq_;
  if (config_.fd_brb_heartbeats) {
    send_all(BrbHeartbeatMsg{self_, seq_, BrbHeartbeatMsg::Phase::Send});
  } else {
    for (NodeId p = 0; p < config_.n; ++p) {
      if (p != self_) net_.send(self_, p, HeartbeatMsg{seq_});
    }
  }
  sim_.schedule(config_.heartbeat_period(), self_, [this] { tick(); });
}

void Monitor::arm(NodeId p) {
  if (timers_[p]) sim_.cancel(*timers_[p]);
  timers_[p] = sim_.schedule(fd_.timeout(p), self_, [this, p] {
    timers_[p].reset();
    emit(fd_.on_timer_expiry(p));
    arm(p);
  });
}

void Monitor::heard(NodeId p) {
  if (p == self_ || p >= config_.n) return;
  emit(fd_.on_heartbeat(p));
  arm(p);
}

void Monitor::emit(const std::vector<Event>& events) {
  for (const auto& e : events) listener_(e);
}

void Monitor::on_heartbeat(NodeId from, const HeartbeatMsg&) { heard(from); }

void Monitor::send_all(const BrbHeartbeatMsg& m) {
  for (NodeId p = 0; p < config_.n; ++p) net_.send(self_, p, m);
}

void Monitor::on_brb_heartbeat(NodeId from, const BrbHeartbeatMsg& m) {
  if (m.origin >= config_.n || from >= config_.n) return;
  if (m.seq <= delivered_upto_[m.origin]) return;
  auto& d = diffusions_[{m.origin, m.seq}];
  using Phase = BrbHeartbeatMsg::Phase;
  const std::size_t n = config_.n;
  const std::size_t f = config_.f;
  switch (m.phase) {
    case Phase::Send:
      if (from != m.origin || d.echoed) return;
      d.echoed = true;
      send_all({m.origin, m.seq, Phase::Echo});
      return;
    case Phase::Echo:
      d.echoes.insert(from);
      if (!d.readied && d.echoes.size() >= (n + f + 2) / 2) {
        d.readied = true;
        send_all({m.origin, m.seq, Phase::Ready});
      }
      return;
    case Phase::Ready:
      d.readies.insert(from);
      if (!d.readied && d.readies.size() >= f + 1) {
        d.readied = true;
        send_all({m.origin, m.seq, Phase::Ready});
      }
      if (d.readies.size() >= 2 * f + 1) {
        delivered_upto_[m.origin] = m.seq;
        auto first = diffusions_.lower_bound({m.origin, 0});
        auto last = diffusions_.upper_bound({m.origin, m.seq});
        diffusions_.erase(first, last);
        heard(m.origin);
      }
      return;
  }
}

}  // namespace iss::fd
