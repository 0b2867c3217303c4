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
#include <memory>

#include "iss/config.hpp"
#include "iss/crypto.hpp"
#include "iss/domain.hpp"
#include "iss/messages.hpp"
#include "iss/trace.hpp"

namespace iss::sb {

using TimerHandle = std::uint64_t;
using trace::RejectReason;

/// Outcome of checking a proposal against the follower rules.
struct Validation {
  bool ok = true;
  RejectReason reason = RejectReason::Malformed;

  static Validation accept() { return {}; }
  static Validation reject(RejectReason r) { return {false, r}; }
};

/// Scripted Byzantine behaviour of the local node, when any.
struct Behavior {
  bool equivocate = false;  // as segment leader, split followers between two batches
  bool straggle = false;
};

/// Services a node provides to each of its SB instances. Messages sent
/// here are scoped to the instance.
class Host {
 public:
  virtual ~Host() = default;

  virtual NodeId self() const = 0;
  virtual SimTime now() const = 0;
  virtual void send(NodeId to, SbPayload msg) = 0;
  /// Sends to every node, including this one.
  virtual void broadcast(SbPayload msg) = 0;
  virtual TimerHandle set_timer(SimTime delay, std::function<void()> fn) = 0;
  virtual void cancel_timer(TimerHandle h) = 0;

  /// SB-DELIVER. Called exactly once per sequence number.
  virtual void deliver(SeqNr sn, const Batch& batch) = 0;
  /// Follower acceptance rules for a proposal by `sender` for `sn`.
  virtual Validation validate(SeqNr sn, const Batch& batch, NodeId sender) = 0;
  /// A proposal was accepted locally (feeds duplicate detection).
  virtual void note_proposal(SeqNr sn, const Batch& batch) = 0;
  virtual void on_suspect_sender() = 0;
  virtual void record(trace::Event ev) = 0;

  virtual const crypto::SignatureScheme& signatures() const = 0;
  virtual Behavior behavior() const { return {}; }
  /// Current verdict of the node's failure detector.
  virtual bool suspects(NodeId) const { return false; }
};

struct Params {
  InstanceKey key;
  NodeId sender = 0;              // segment leader
  std::vector<SeqNr> seq_nrs;     // sorted
  const NodeConfig* config = nullptr;
};

/// One Sequenced Broadcast instance at one node.
class Orderer {
 public:
  virtual ~Orderer() = default;

  /// SB-INIT.
  virtual void init() = 0;
  /// SB-CAST; only valid at the sender, for sn in the instance's set.
  virtual void cast(SeqNr sn, Batch batch) = 0;
  virtual void on_message(NodeId from, const SbPayload& msg) = 0;

  /// Failure-detector stream (used by the reference binding).
  virtual void on_suspect(NodeId) {}
  virtual void on_restore(NodeId) {}

  /// Stops timers; the instance is garbage.
  virtual void stop() = 0;
  virtual bool complete() const = 0;
};

/// Thrown on contract misuse (cast by a non-sender, sn outside the set,
/// double init).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace iss::sb
