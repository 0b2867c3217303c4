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

#include <memory>
#include <variant>
#include <vector>

#include "iss/types.hpp"

namespace iss {

/// Identifies one SB instance: the segment of `leader` in `epoch`. The
/// SB-only harness uses epoch 0 and the sender as leader.
struct InstanceKey {
  EpochNr epoch = 0;
  NodeId leader = 0;

  friend bool operator==(const InstanceKey&, const InstanceKey&) = default;
  friend auto operator<=>(const InstanceKey&, const InstanceKey&) = default;
};

// ---------------------------------------------------------------------------
// PBFT

struct PbftPrePrepare {
  std::uint64_t view = 0;
  SeqNr sn = 0;
  Batch batch;
  Digest digest{};
};

struct PbftPrepare {
  std::uint64_t view = 0;
  SeqNr sn = 0;
  Digest digest{};
  NodeId sender = 0;
  Bytes sig;
};

struct PbftCommit {
  std::uint64_t view = 0;
  SeqNr sn = 0;
  Digest digest{};
};

struct SignedPrepare {
  NodeId sender = 0;
  Bytes sig;
};

/// A pre-prepared value together with 2f matching signed prepares.
struct PreparedCert {
  SeqNr sn = 0;
  std::uint64_t view = 0;
  Batch batch;
  Digest digest{};
  std::vector<SignedPrepare> prepares;
};

struct PbftViewChange {
  std::uint64_t new_view = 0;
  NodeId sender = 0;
  std::vector<PreparedCert> prepared;
  Bytes sig;
};

struct PbftNewView {
  std::uint64_t view = 0;
  std::vector<PbftViewChange> view_changes;
  std::vector<PbftPrePrepare> pre_prepares;
};

// ---------------------------------------------------------------------------
// Raft

struct RaftEntry {
  std::uint64_t term = 0;
  std::int64_t slot = -1;  // index into the segment's sequence numbers; -1 = no-op
  Batch batch;
};

struct RaftAppend {
  std::uint64_t term = 0;
  std::uint64_t prev_index = 0;
  std::uint64_t prev_term = 0;
  std::vector<RaftEntry> entries;
  std::uint64_t leader_commit = 0;
};

struct RaftAppendResp {
  std::uint64_t term = 0;
  bool success = false;
  std::uint64_t match_index = 0;
};

struct RaftVote {
  std::uint64_t term = 0;
  std::uint64_t last_index = 0;
  std::uint64_t last_term = 0;
};

struct RaftVoteResp {
  std::uint64_t term = 0;
  bool granted = false;
};

// ---------------------------------------------------------------------------
// Bracha reliable broadcast, one logical instance per tag

struct BrbSend {
  SeqNr tag = 0;
  Batch value;
};

struct BrbEcho {
  SeqNr tag = 0;
  Batch value;
};

struct BrbReady {
  SeqNr tag = 0;
  Digest digest{};
};

using SbPayload = std::variant<PbftPrePrepare, PbftPrepare, PbftCommit, PbftViewChange,
                               PbftNewView, RaftAppend, RaftAppendResp, RaftVote, RaftVoteResp,
                               BrbSend, BrbEcho, BrbReady>;

struct SbMessage {
  InstanceKey key;
  SbPayload body;
};

// ---------------------------------------------------------------------------
// Node <-> node (manager level)

struct StableCheckpoint {
  EpochNr epoch = 0;
  SeqNr max_sn = 0;
  Digest root{};
  std::vector<SignedPrepare> signatures;  // (signer, sig) over (epoch, max_sn, root)
};

struct CheckpointMsg {
  EpochNr epoch = 0;
  SeqNr max_sn = 0;
  Digest root{};
  Bytes sig;
};

struct StateRequestMsg {
  EpochNr from_epoch = 0;
};

struct EpochTransfer {
  EpochNr epoch = 0;
  std::vector<Batch> entries;  // the epoch's range, in sn order
  StableCheckpoint checkpoint;
};

struct StateResponseMsg {
  std::vector<EpochTransfer> epochs;
};

struct HeartbeatMsg {
  std::uint64_t seq = 0;
};

/// Heartbeats diffused through reliable broadcast; `origin` is the node
/// whose liveness is attested.
struct BrbHeartbeatMsg {
  NodeId origin = 0;
  std::uint64_t seq = 0;
  enum class Phase : std::uint8_t { Send, Echo, Ready } phase = Phase::Send;
};

// ---------------------------------------------------------------------------
// Client <-> node

struct RequestMsg {
  RequestPtr request;
};

struct ResponseEntry {
  RequestId id;
  std::uint64_t snr = 0;
};

struct ResponseMsg {
  NodeId node = 0;
  std::vector<ResponseEntry> entries;
  Bytes sig;
};

struct AssignmentMsg {
  EpochNr epoch = 0;
  std::vector<NodeId> leaders;
};

using Payload = std::variant<SbMessage, CheckpointMsg, StateRequestMsg, StateResponseMsg,
                             HeartbeatMsg, BrbHeartbeatMsg, RequestMsg, ResponseMsg, AssignmentMsg>;

using PayloadPtr = std::shared_ptr<const Payload>;

/// Approximate encoded size, used by the bandwidth model.
std::size_t wire_size(const Payload& p);

// Digests signed by the respective message authors.
Digest prepare_digest(const InstanceKey& key, std::uint64_t view, SeqNr sn, const Digest& value);
Digest view_change_digest(const InstanceKey& key, const PbftViewChange& vc);
Digest checkpoint_digest(EpochNr epoch, SeqNr max_sn, const Digest& root);
Digest response_digest(NodeId node, const std::vector<ResponseEntry>& entries);

}  // namespace iss
