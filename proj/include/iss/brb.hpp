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
#include <optional>
#include <set>

#include "iss/types.hpp"

namespace iss::brb {

/// Outputs of one step of a Bracha broadcast instance. The host broadcasts
/// `echo` / `ready` to all nodes (itself included) and acts on `deliver`.
template <typename Value>
struct Step {
  std::optional<Value> echo;
  std::optional<Digest> ready;
  std::optional<Value> deliver;
};

/// Bracha's reliable broadcast for one (sender, tag). Requires n >= 3f+1.
/// SEND -> ECHO; ceil((n+f+1)/2) matching ECHO or f+1 READY -> READY;
/// 2f+1 READY with the value known -> deliver (at most once).
template <typename Value, typename DigestFn>
class Instance {
 public:
  Instance(std::size_t n, std::size_t f, NodeId sender, DigestFn digest)
      : n_(n), f_(f), sender_(sender), digest_(std::move(digest)) {}

  Step<Value> on_send(NodeId from, const Value& v) {
    Step<Value> out;
    if (from != sender_ || echoed_) return out;
    echoed_ = true;
    out.echo = v;
    return out;
  }

  Step<Value> on_echo(NodeId from, const Value& v) {
    Step<Value> out;
    const auto d = digest_(v);
    values_.emplace(d, v);
    auto& voters = echoes_[d];
    if (!voters.insert(from).second) return out;
    if (!readied_ && voters.size() >= echo_quorum()) {
      readied_ = true;
      out.ready = d;
    }
    try_deliver(out);
    return out;
  }

  Step<Value> on_ready(NodeId from, const Digest& d) {
    Step<Value> out;
    auto& voters = readies_[d];
    if (!voters.insert(from).second) return out;
    if (!readied_ && voters.size() >= f_ + 1) {
      readied_ = true;
      out.ready = d;
    }
    try_deliver(out);
    return out;
  }

  bool delivered() const { return delivered_; }
  std::size_t echo_quorum() const { return (n_ + f_ + 2) / 2; }  // ceil((n+f+1)/2)

 private:
  void try_deliver(Step<Value>& out) {
    if (delivered_) return;
    for (const auto& [d, voters] : readies_) {
      if (voters.size() < 2 * f_ + 1) continue;
      auto it = values_.find(d);
      if (it == values_.end()) continue;
      delivered_ = true;
      out.deliver = it->second;
      return;
    }
  }

  std::size_t n_;
  std::size_t f_;
  NodeId sender_;
  DigestFn digest_;
  bool echoed_ = false;
  bool readied_ = false;
  bool delivered_ = false;
  std::map<Digest, Value> values_;
  std::map<Digest, std::set<NodeId>> echoes_;
  std::map<Digest, std::set<NodeId>> readies_;
};

}  // namespace iss::brb
