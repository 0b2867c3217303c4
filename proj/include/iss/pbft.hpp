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

#include "iss/sb.hpp"

namespace iss::pbft {

/// Agreement-mode hooks: PBFT decides one value per slot among values the
/// local node is willing to accept, instead of ordering a leader's casts.
class ConsensusHooks {
 public:
  virtual ~ConsensusHooks() = default;
  /// Value this node proposed for sn, if it has proposed yet.
  virtual std::optional<Batch> local_proposal(SeqNr sn) const = 0;
  /// True if a primary's value for sn may be accepted now; false defers it.
  virtual bool acceptable(SeqNr sn, const Batch& value) const = 0;
  virtual void decide(SeqNr sn, const Batch& value) = 0;
};

/// PBFT as an SB binding. View 0's primary is the segment leader; a
/// liveness timer that any commit resets triggers signed view changes;
/// primaries of later views only re-propose prepared values and nil.
///
/// With ConsensusHooks the same machinery runs as a per-slot agreement
/// (used behind the reference SB): primaries propose their own local
/// proposal and followers accept values the hooks vouch for.
class PbftOrderer final : public sb::Orderer {
 public:
  PbftOrderer(sb::Host& host, sb::Params params, ConsensusHooks* hooks = nullptr);
  ~PbftOrderer() override;

  void init() override;
  void cast(SeqNr sn, Batch batch) override;
  void on_message(NodeId from, const SbPayload& msg) override;
  void stop() override;
  bool complete() const override { return delivered_count_ == slots_.size(); }

  /// Agreement mode: a local proposal or an acceptance condition changed.
  void poke();

  std::uint64_t view() const { return view_; }
  bool view_changing() const { return changing_; }
  NodeId primary(std::uint64_t view) const;

 private:
  struct Slot {
    SeqNr sn = 0;
    std::optional<PbftPrePrepare> pre_prepare;  // accepted in the current view
    std::optional<PbftPrePrepare> deferred;     // agreement mode, awaiting acceptance
    std::map<std::pair<std::uint64_t, Digest>, std::map<NodeId, Bytes>> prepares;
    std::map<std::pair<std::uint64_t, Digest>, std::set<NodeId>> commits;
    std::optional<PreparedCert> cert;  // highest-view prepared certificate
    std::map<Digest, Batch> known;     // well-formed primary values, any view
    bool commit_sent = false;
    bool delivered = false;
  };

  bool agreement_mode() const { return hooks_ != nullptr; }
  Slot* slot(SeqNr sn);
  std::size_t quorum() const;

  void on_pre_prepare(NodeId from, const PbftPrePrepare& pp, bool from_new_view);
  void accept_pre_prepare(Slot& s, const PbftPrePrepare& pp);
  void on_prepare(NodeId from, const PbftPrepare& p);
  void on_commit(NodeId from, const PbftCommit& c);
  void on_view_change(NodeId from, const PbftViewChange& vc);
  void on_new_view(NodeId from, const PbftNewView& nv);
  void enter_view(std::uint64_t view, const std::vector<PbftPrePrepare>& pps,
                  const std::map<SeqNr, Digest>& forced);
  void reject(SeqNr sn, sb::RejectReason reason);

  void check_prepared(Slot& s);
  void check_committed(Slot& s);
  void deliver(Slot& s, const Batch& value);

  void start_view_change(std::uint64_t target);
  void maybe_send_new_view(std::uint64_t target);
  bool valid_view_change(NodeId from, const PbftViewChange& vc) const;
  bool valid_cert(const PreparedCert& cert) const;
  std::vector<PbftPrePrepare> new_view_proposals(std::uint64_t view,
                                                 const std::vector<PbftViewChange>& vcs) const;
  static std::map<SeqNr, const PreparedCert*> best_certs(const std::vector<PbftViewChange>& vcs);
  void propose_own_values();

  bool liveness_needed() const;
  void arm_liveness_timer();
  void disarm_timer();

  sb::Host& host_;
  sb::Params params_;
  const NodeConfig& config_;
  ConsensusHooks* hooks_;
  std::vector<Slot> slots_;
  std::size_t delivered_count_ = 0;

  bool initialized_ = false;
  bool stopped_ = false;
  std::uint64_t view_ = 0;
  bool changing_ = false;
  std::uint64_t target_view_ = 0;
  bool suspected_sender_ = false;
  SimTime timeout_;
  std::optional<sb::TimerHandle> timer_;

  std::map<std::uint64_t, std::map<NodeId, PbftViewChange>> view_changes_;
  std::set<std::uint64_t> new_view_sent_;
  std::set<SeqNr> proposed_;  // agreement mode, by this primary in the current view
  std::vector<std::pair<NodeId, PbftPrePrepare>> future_;  // pre-prepares for later views
};

}  // namespace iss::pbft
