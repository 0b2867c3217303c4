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

#include "iss/brb.hpp"
#include "iss/pbft.hpp"

namespace iss::reference {

/// Agreement oracle living inside the simulator. Once every correct node has
/// proposed for a slot it decides: the common value if all correct
/// proposals agree, otherwise the value of the lowest-id correct node.
class IdealConsensus {
 public:
  using Decide = std::function<void(SeqNr, const Batch&)>;

  explicit IdealConsensus(std::vector<NodeId> correct);

  void attach(const InstanceKey& key, NodeId node, Decide fn);
  void detach(const InstanceKey& key, NodeId node);
  void propose(const InstanceKey& key, SeqNr sn, NodeId node, const Batch& value);

  std::size_t decided() const { return decisions_; }

 private:
  struct Slot {
    std::map<NodeId, Batch> proposals;
    std::optional<Batch> decision;
  };
  struct Instance {
    std::map<SeqNr, Slot> slots;
    std::map<NodeId, Decide> listeners;
  };

  void maybe_decide(Instance& inst, SeqNr sn);

  std::vector<NodeId> correct_;
  std::map<InstanceKey, Instance> instances_;
  std::size_t decisions_ = 0;
};

/// SB built from one reliable broadcast and one agreement instance per
/// sequence number. The sender broadcasts each batch; a node proposes what
/// it reliably delivers, and nil for everything still unproposed once it
/// suspects the sender after init. Decisions are delivered.
///
/// Besides the node's detector, a sender counts as suspected when its
/// broadcasts make no progress for one epoch-change timeout; a sender that
/// equivocates keeps its heartbeats alive but is quiet toward the instance.
class ReferenceOrderer final : public sb::Orderer, public pbft::ConsensusHooks {
 public:
  /// Agreement through the oracle (`ideal` non-null) or through PBFT.
  ReferenceOrderer(sb::Host& host, sb::Params params, IdealConsensus* ideal);
  ~ReferenceOrderer() override;

  void init() override;
  void cast(SeqNr sn, Batch batch) override;
  void on_message(NodeId from, const SbPayload& msg) override;
  void on_suspect(NodeId p) override;
  void on_restore(NodeId) override;
  void stop() override;
  bool complete() const override { return delivered_count_ == params_.seq_nrs.size(); }

  bool aborted() const { return aborted_; }

 private:
  struct BatchDigest {
    Digest operator()(const Batch& b) const { return b.digest(); }
  };
  using Brb = brb::Instance<Batch, BatchDigest>;

  Brb& brb_for(SeqNr sn);
  bool in_segment(SeqNr sn) const;
  void apply(SeqNr sn, const brb::Step<Batch>& step);
  void propose(SeqNr sn, const Batch& value);
  void abort();
  void arm_quiet_timer();
  void on_decide(SeqNr sn, const Batch& value);

  std::optional<Batch> local_proposal(SeqNr sn) const override;
  bool acceptable(SeqNr sn, const Batch& value) const override;
  void decide(SeqNr sn, const Batch& value) override;

  sb::Host& host_;
  sb::Params params_;
  IdealConsensus* ideal_;
  std::unique_ptr<pbft::PbftOrderer> bc_;

  bool initialized_ = false;
  bool stopped_ = false;
  bool aborted_ = false;
  std::map<SeqNr, Brb> brb_;
  std::map<SeqNr, Batch> brb_delivered_;
  std::map<SeqNr, Batch> proposed_;
  std::map<SeqNr, bool> delivered_;
  std::size_t delivered_count_ = 0;
  std::vector<sb::TimerHandle> pending_timers_;
  std::optional<sb::TimerHandle> quiet_timer_;
};

}  // namespace iss::reference
