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

#include <string>

#include "iss/config.hpp"
#include "iss/trace.hpp"
#include "iss/types.hpp"

namespace iss::testing {

inline Digest digest_from_hex(const std::string& hex) {
  Digest d{};
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<std::uint8_t>(std::stoi(hex.substr(2 * i, 2), nullptr, 16));
  return d;
}

inline RequestPtr make_request(ClientId c, std::uint64_t t, Bytes payload = {}) {
  return std::make_shared<const Request>(Request::make(RequestId{t, c}, std::move(payload)));
}

inline Batch make_batch(std::initializer_list<std::pair<ClientId, std::uint64_t>> ids) {
  std::vector<RequestPtr> reqs;
  for (auto [c, t] : ids) reqs.push_back(make_request(c, t));
  return Batch::of(std::move(reqs));
}

/// A small, quick scenario: n nodes, light client load, short horizon.
inline ScenarioConfig small_scenario(std::size_t n, std::size_t f, OrdererKind orderer) {
  ScenarioConfig c;
  c.node.n = n;
  c.node.f = f;
  c.node.orderer = orderer;
  if (orderer == OrdererKind::Raft) c.node.fault_model = FaultModel::CrashOnly;
  c.node.policy = PolicyKind::Blacklist;
  c.node.epoch_length = 4 * n;
  c.node.max_batch_size = 16;
  c.node.max_batch_timeout = 100 * kMillisecond;
  c.node.epoch_change_timeout = kSecond;
  c.clients.count = 3;
  c.clients.rate = 10;
  c.clients.duration = 2 * kSecond;
  c.horizon = 60 * kSecond;
  return c;
}

template <typename T>
std::vector<const T*> events_of(const trace::Trace& trace) {
  std::vector<const T*> out;
  for (const auto& e : trace) {
    if (const auto* p = std::get_if<T>(&e)) out.push_back(p);
  }
  return out;
}

}  // namespace iss::testing

namespace iss::testing {

/// Single-instance SB configuration: sender 0 orders `slots` batches.
inline ScenarioConfig sb_scenario(OrdererKind orderer, std::size_t slots = 8) {
  auto c = small_scenario(4, 1, orderer);
  c.node.epoch_length = slots;
  c.node.epoch_change_timeout = 500 * kMillisecond;
  c.horizon = 120 * kSecond;
  return c;
}

inline FaultSpec crash_at(NodeId node, SimTime at) {
  FaultSpec f;
  f.type = FaultType::Crash;
  f.node = node;
  f.at = at;
  return f;
}

inline FaultSpec equivocator(NodeId node) {
  FaultSpec f;
  f.type = FaultType::Equivocator;
  f.node = node;
  return f;
}

}  // namespace iss::testing
