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
#include <variant>
#include <vector>

#include "iss/messages.hpp"
#include "iss/types.hpp"

namespace iss::trace {

/// First record of every trace: what a verifier needs to know about the run.
struct RunInfo {
  std::uint64_t seed = 0;
  std::uint32_t n = 0;
  std::uint32_t f = 0;
  bool byzantine_model = true;
  std::string orderer;
  std::string policy;
  std::uint64_t epoch_length = 0;
  std::uint32_t num_buckets = 0;
  std::uint32_t leader_set_size = 0;
  std::uint32_t clients = 0;
  std::uint64_t max_epochs = 0;  // 0 = unbounded
  bool sb_only = false;          // single-instance SB harness run
  bool compact = false;          // SMR deliveries recorded for one node only
  std::uint64_t liveness_margin = 0;  // ns; deliveries owed only for work older than this
  std::vector<NodeId> faulty;    // nodes excluded from correctness checks
};

struct ClientCast {
  SimTime t = 0;
  RequestId id;
  Digest digest{};
};

struct ClientComplete {
  SimTime t = 0;
  RequestId id;
};

struct SegmentInfo {
  NodeId leader = 0;
  std::vector<SeqNr> seq_nrs;
  std::vector<BucketId> buckets;
};

struct EpochStart {
  SimTime t = 0;
  NodeId node = 0;
  EpochNr epoch = 0;
  SeqNr first_sn = 0;
  SeqNr length = 0;
  std::vector<NodeId> leaders;
  std::vector<SegmentInfo> segments;
};

struct EpochComplete {
  SimTime t = 0;
  NodeId node = 0;
  EpochNr epoch = 0;
};

struct SbInit {
  SimTime t = 0;
  NodeId node = 0;
  InstanceKey key;
  std::vector<SeqNr> seq_nrs;
};

struct SbCast {
  SimTime t = 0;
  NodeId node = 0;
  InstanceKey key;
  SeqNr sn = 0;
  Digest digest{};
};

struct SbDeliver {
  SimTime t = 0;
  NodeId node = 0;
  InstanceKey key;
  SeqNr sn = 0;
  bool nil = false;
  Digest digest{};
};

struct SbSuspect {
  SimTime t = 0;
  NodeId node = 0;
  InstanceKey key;
  NodeId suspected = 0;
};

struct TransferInstall {
  SimTime t = 0;
  NodeId node = 0;
  EpochNr epoch = 0;
  SeqNr sn = 0;
  bool nil = false;
  Digest digest{};
};

struct SmrDeliver {
  SimTime t = 0;
  NodeId node = 0;
  std::uint64_t snr = 0;
  SeqNr sn = 0;
  RequestId id;
  Digest digest{};
};

enum class RejectReason : std::uint8_t {
  InvalidRequest = 1,    // (a)
  Duplicate = 2,         // (b)
  ForeignBucket = 3,     // (c)
  NotSegmentLeader = 4,  // (d)
  Malformed = 5,
};

struct ProposalRejected {
  SimTime t = 0;
  NodeId node = 0;
  InstanceKey key;
  SeqNr sn = 0;
  RejectReason reason = RejectReason::Malformed;
};

struct ViewChange {
  SimTime t = 0;
  NodeId node = 0;
  InstanceKey key;
  std::uint64_t view = 0;
};

struct LeaderElected {
  SimTime t = 0;
  NodeId node = 0;
  InstanceKey key;
  std::uint64_t term = 0;
};

struct CheckpointStable {
  SimTime t = 0;
  NodeId node = 0;
  EpochNr epoch = 0;
  Digest root{};
  std::uint32_t signers = 0;
};

struct StateTransfer {
  SimTime t = 0;
  NodeId node = 0;
  NodeId peer = 0;
  EpochNr first_epoch = 0;
  EpochNr last_epoch = 0;
  bool accepted = false;
};

enum class FaultKind : std::uint8_t {
  Crash = 1,
  Straggler = 2,
  Equivocator = 3,
  WrongCheckpoint = 4,
  PartitionStart = 5,
  PartitionEnd = 6,
};

struct Fault {
  SimTime t = 0;
  NodeId node = 0;
  FaultKind kind = FaultKind::Crash;
};

struct FinalLog {
  SimTime t = 0;
  NodeId node = 0;
  EpochNr completed_epochs = 0;
  SeqNr extent = 0;
  Digest log_digest{};
  std::vector<Digest> epoch_roots;
};

struct RunEnd {
  SimTime t = 0;
  bool liveness_evaluable = false;
  bool completed = false;
};

using Event = std::variant<RunInfo, ClientCast, ClientComplete, EpochStart, EpochComplete, SbInit,
                           SbCast, SbDeliver, SbSuspect, TransferInstall, SmrDeliver,
                           ProposalRejected, ViewChange, LeaderElected, CheckpointStable,
                           StateTransfer, Fault, FinalLog, RunEnd>;

using Trace = std::vector<Event>;

/// Canonical encoding of one event (no length prefix).
Bytes encode(const Event& e);
Event decode(std::span<const std::uint8_t> record);

/// File image: magic, then u32 big-endian length-prefixed records.
Bytes serialize(const Trace& trace);
Trace deserialize(std::span<const std::uint8_t> data);

/// Parses as many whole records as present; a cut-off tail is dropped.
Trace deserialize_prefix(std::span<const std::uint8_t> data, bool* truncated = nullptr);

void write_file(const std::string& path, const Trace& trace);
Trace read_file(const std::string& path, bool* truncated = nullptr);

SimTime time_of(const Event& e);
std::string_view name_of(const Event& e);

}  // namespace iss::trace
