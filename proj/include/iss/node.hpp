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
#include <memory>
#include <set>
#include <unordered_map>

#include "iss/buckets.hpp"
#include "iss/client.hpp"
#include "iss/heartbeat.hpp"
#include "iss/policies.hpp"
#include "iss/recorder.hpp"
#include "iss/reference_sb.hpp"
#include "iss/sb.hpp"
#include "iss/sim.hpp"

namespace iss {

struct NodeEnv {
  sim::Simulator& sim;
  sim::Network& net;
  const crypto::SignatureScheme& sigs;
  Recorder& recorder;
  const ScenarioConfig& scenario;
  reference::IdealConsensus* ideal = nullptr;  // agreement oracle for the reference orderer
};

/// One ISS replica: runs epochs of parallel SB instances, multiplexes their
/// deliveries into the log, delivers requests in log order, checkpoints
/// each epoch and catches up through state transfer.
class IssNode : public sim::Process {
 public:
  IssNode(NodeId id, NodeEnv env);
  ~IssNode() override;

  void start() override;
  void receive(ProcessId from, const Payload& msg) override;

  // Scripted faults.
  void crash();
  void set_straggler(bool on) { straggler_ = on; }
  void set_equivocator(bool on) { equivocator_ = on; }
  void set_wrong_checkpoints(bool on) { wrong_checkpoints_ = on; }
  void crash_at_epoch_start(EpochNr e) { crash_at_start_ = e; }
  void crash_before_last_proposal(EpochNr e) { crash_before_last_ = e; }

  NodeId id() const { return id_; }
  bool crashed() const { return crashed_; }
  /// Epochs fully committed locally.
  EpochNr completed_epochs() const { return completed_; }
  bool reached_epoch_limit() const { return limit_reached_; }
  const Log& log() const { return log_; }
  const EpochLayout& layout() const { return layout_; }
  std::uint64_t delivered_requests() const { return log_.total_delivered(); }
  std::size_t live_instances() const { return instances_.size(); }
  std::optional<StableCheckpoint> stable_checkpoint(EpochNr e) const;
  std::uint64_t low_watermark(ClientId c) const { return validator_.low(c); }

  /// End-of-run summary; the digest covers the first `common_epochs` epochs.
  trace::FinalLog final_log(EpochNr common_epochs) const;

 private:
  class Instance;
  friend class Instance;

  // Epochs
  void start_epoch(EpochNr e);
  void complete_epoch(EpochNr e);
  void after_commit();
  void arm_epoch_timer();

  // Proposing
  void try_propose();
  void arm_propose_timer(SimTime at);
  void cast_next(Batch batch);

  // SB interface
  void on_sb_message(NodeId from, const SbMessage& m);
  void on_sb_deliver(Instance& inst, SeqNr sn, const Batch& batch);
  sb::Validation validate(const Instance& inst, SeqNr sn, const Batch& batch, NodeId sender);
  void note_proposal(SeqNr sn, const Batch& batch);
  void commit(SeqNr sn, const Batch& batch);
  std::unique_ptr<sb::Orderer> make_orderer(Instance& inst, sb::Params params);

  // Requests and responses
  void on_request(ProcessId from, const RequestMsg& m);
  bool committed(const RequestId& id) const;
  void respond(const std::vector<Delivery>& deliveries);

  // Checkpoints and state transfer
  void on_checkpoint(NodeId from, const CheckpointMsg& m);
  void collect_garbage();
  void request_transfer();
  void on_state_request(NodeId from, const StateRequestMsg& m);
  void on_state_response(NodeId from, const StateResponseMsg& m);
  bool verify_transfer(const EpochTransfer& t) const;

  void on_fd_event(const fd::Event& e);
  void emit_fault(trace::FaultKind kind);

  NodeId id_;
  NodeEnv env_;
  const NodeConfig& config_;
  bool crashed_ = false;

  EpochLayout layout_;
  Log log_;
  BucketQueues queues_;
  policy::LeaderPolicy policy_;
  RequestValidator validator_;
  std::unique_ptr<fd::Monitor> monitor_;

  // Epoch state
  EpochNr current_ = 0;  // epoch whose instances are running
  EpochNr completed_ = 0;
  bool limit_reached_ = false;
  std::vector<Segment> segments_;
  std::map<InstanceKey, std::unique_ptr<Instance>> instances_;
  std::map<EpochNr, std::vector<std::pair<NodeId, SbMessage>>> buffered_;
  std::optional<sim::TimerId> epoch_timer_;
  std::vector<Digest> epoch_roots_;

  // Own segment
  std::optional<Segment> own_segment_;
  std::size_t next_slot_ = 0;
  std::size_t in_flight_ = 0;
  SimTime last_cut_ = std::numeric_limits<SimTime>::min() / 2;
  SimTime segment_start_ = 0;
  std::optional<sim::TimerId> propose_timer_;
  bool proposing_ = false;
  bool in_after_commit_ = false;
  bool commit_dirty_ = false;
  std::map<SeqNr, Batch> proposed_;

  // Duplicate detection
  std::unordered_map<RequestId, SeqNr, RequestIdHash> in_flight_ids_;
  std::map<SeqNr, std::vector<RequestId>> noted_;
  std::vector<std::set<std::uint64_t>> committed_;  // per client, timestamps >= low watermark

  // Checkpoints
  std::map<EpochNr, std::map<std::pair<SeqNr, Digest>, std::map<NodeId, Bytes>>> attestations_;
  std::map<EpochNr, StableCheckpoint> stable_;
  EpochNr collected_ = 0;  // instances of epochs below this are gone

  // State transfer
  bool installing_ = false;
  bool transfer_pending_ = false;
  std::optional<sim::TimerId> transfer_timer_;
  std::size_t transfer_attempt_ = 0;

  // Scripted behaviour
  bool straggler_ = false;
  bool equivocator_ = false;
  bool wrong_checkpoints_ = false;
  std::optional<EpochNr> crash_at_start_;
  std::optional<EpochNr> crash_before_last_;
};

}  // namespace iss
