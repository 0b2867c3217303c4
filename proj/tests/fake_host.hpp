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

#include <map>

#include "iss/crypto.hpp"
#include "iss/sb.hpp"

namespace iss::testing {

/// Records everything an orderer asks of its node.
struct FakeHost : sb::Host {
  explicit FakeHost(NodeId id, std::size_t n = 4) : id(id), sigs(crypto::make_mac_scheme(1, n)) {}

  NodeId id;
  SimTime time = 0;
  std::unique_ptr<crypto::SignatureScheme> sigs;
  std::vector<std::pair<NodeId, SbPayload>> sent;
  std::vector<SbPayload> broadcasts;
  std::map<sb::TimerHandle, std::pair<SimTime, std::function<void()>>> timers;
  sb::TimerHandle next_timer = 1;
  std::vector<std::pair<SeqNr, Batch>> delivered;
  std::vector<std::pair<SeqNr, Batch>> noted;
  std::vector<trace::Event> records;
  int suspect_sender_calls = 0;
  bool suspecting = false;
  sb::Validation verdict = sb::Validation::accept();

  NodeId self() const override { return id; }
  SimTime now() const override { return time; }
  void send(NodeId to, SbPayload msg) override { sent.emplace_back(to, std::move(msg)); }
  void broadcast(SbPayload msg) override { broadcasts.push_back(std::move(msg)); }
  sb::TimerHandle set_timer(SimTime delay, std::function<void()> fn) override {
    timers[next_timer] = {time + delay, std::move(fn)};
    return next_timer++;
  }
  void cancel_timer(sb::TimerHandle h) override { timers.erase(h); }
  void deliver(SeqNr sn, const Batch& batch) override { delivered.emplace_back(sn, batch); }
  sb::Validation validate(SeqNr, const Batch&, NodeId) override { return verdict; }
  void note_proposal(SeqNr sn, const Batch& batch) override { noted.emplace_back(sn, batch); }
  void on_suspect_sender() override { ++suspect_sender_calls; }
  void record(trace::Event ev) override { records.push_back(std::move(ev)); }
  const crypto::SignatureScheme& signatures() const override { return *sigs; }
  bool suspects(NodeId) const override { return suspecting; }

  /// Fires every timer due by `t`, in due order.
  void advance(SimTime t) {
    while (!timers.empty()) {
      auto it = std::min_element(timers.begin(), timers.end(), [](const auto& a, const auto& b) {
        return a.second.first < b.second.first;
      });
      if (it->second.first > t) break;
      time = it->second.first;
      auto fn = std::move(it->second.second);
      timers.erase(it);
      fn();
    }
    time = t;
  }
};

}  // namespace iss::testing
