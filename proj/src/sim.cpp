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

#include "iss/sim.hpp"

#include <algorithm>

namespace iss::sim {

TimerId Simulator::schedule(SimTime delay, ProcessId owner, Action fn) {
  const auto id = next_seq_++;
  queue_.push(Entry{now_ + std::max<SimTime>(delay, 0), id, owner, std::move(fn)});
  return id;
}

void Simulator::cancel(TimerId id) { cancelled_.insert(id); }

SimTime Simulator::run_until(SimTime horizon, const std::function<bool()>& stop) {
  while (!queue_.empty()) {
    const Entry& top = queue_.top();
    if (top.time > horizon) break;
    auto fn = std::move(top.fn);
    const auto seq = top.seq;
    const auto owner = top.owner;
    now_ = top.time;
    queue_.pop();
    if (auto it = cancelled_.find(seq); it != cancelled_.end()) {
      cancelled_.erase(it);
      continue;
    }
    if (owner != kNoOwner && crashed(owner)) continue;
    ++processed_;
    fn();
    if (stop && stop()) break;
  }
  return now_;
}

void Simulator::crash(ProcessId p) {
  if (p >= crashed_.size()) crashed_.resize(p + 1, false);
  crashed_[p] = true;
}

Network::Network(Simulator& sim, NetworkParams params, std::uint64_t seed)
    : sim_(sim), params_(params), rng_(seed), link_free_(params.nodes, 0) {}

void Network::attach(ProcessId id, Process* p) {
  if (id >= procs_.size()) procs_.resize(id + 1, nullptr);
  procs_[id] = p;
}

SimTime Network::sample_delay() {
  const auto mean = static_cast<double>(params_.mean_delay);
  if (sim_.now() < params_.gst) {
    std::uniform_real_distribution<double> d(0.0, params_.pre_gst_factor * mean);
    return static_cast<SimTime>(d(rng_));
  }
  if (params_.jitter <= 0) return params_.mean_delay;
  std::uniform_real_distribution<double> d(1.0 - params_.jitter, 1.0 + params_.jitter);
  return static_cast<SimTime>(mean * d(rng_));
}

bool Network::cut(ProcessId a, ProcessId b, SimTime t) const {
  for (const auto& p : partitions_) {
    if (t < p.start || t >= p.end) continue;
    bool ia = std::find(p.isolated.begin(), p.isolated.end(), a) != p.isolated.end();
    bool ib = std::find(p.isolated.begin(), p.isolated.end(), b) != p.isolated.end();
    if (ia != ib) return true;
  }
  return false;
}

void Network::send(ProcessId from, ProcessId to, PayloadPtr msg) {
  if (sim_.crashed(from)) return;
  if (cut(from, to, sim_.now())) return;
  const auto size = wire_size(*msg);
  ++sent_;
  bytes_ += size;
  SimTime delay = 0;
  if (from != to) {
    delay = sample_delay();
    if (params_.egress_bytes_per_sec > 0 && from < params_.nodes) {
      // Transmission is serialized on the sender's egress link.
      const auto tx = static_cast<SimTime>(static_cast<double>(size) * kSecond /
                                           params_.egress_bytes_per_sec);
      const auto depart = std::max(sim_.now(), link_free_[from]) + tx;
      link_free_[from] = depart;
      delay += depart - sim_.now();
    }
  }
  auto* target = to < procs_.size() ? procs_[to] : nullptr;
  if (!target) return;
  sim_.schedule(delay, to, [this, from, to, msg = std::move(msg)] {
    if (cut(from, to, sim_.now())) return;
    procs_[to]->receive(from, *msg);
  });
}

}  // namespace iss::sim
