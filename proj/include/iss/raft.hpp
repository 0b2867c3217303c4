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

#include <random>
#include <set>

#include "iss/sb.hpp"

namespace iss::raft {

/// Raft as a crash-fault SB binding. The segment leader starts as leader of
/// term 1 without an election. Entries carry (term, slot, batch); a leader
/// elected later appends a no-op and then nil for every slot missing from
/// its log. Each committed slot is delivered once.
class RaftOrderer final : public sb::Orderer {
 public:
  enum class Role { Follower, Candidate, Leader };

  RaftOrderer(sb::Host& host, sb::Params params);
  ~RaftOrderer() override;

  void init() override;
  void cast(SeqNr sn, Batch batch) override;
  void on_message(NodeId from, const SbPayload& msg) override;
  void stop() override;
  bool complete() const override { return delivered_count_ == params_.seq_nrs.size(); }

  std::uint64_t term() const { return term_; }
  Role role() const { return role_; }
  std::uint64_t commit_index() const { return commit_index_; }

 private:
  std::uint64_t last_index() const { return log_.size(); }
  std::uint64_t term_at(std::uint64_t index) const {
    return index == 0 ? 0 : log_[index - 1].term;
  }
  std::size_t majority() const { return params_.config->n / 2 + 1; }

  void on_append(NodeId from, const RaftAppend& m);
  void on_append_resp(NodeId from, const RaftAppendResp& m);
  void on_vote(NodeId from, const RaftVote& m);
  void on_vote_resp(NodeId from, const RaftVoteResp& m);

  void observe_term(std::uint64_t term);
  void become_follower(std::uint64_t term);
  void start_election();
  void become_leader();
  void replicate_to(NodeId peer);
  void replicate_all();
  void advance_commit();
  void apply();

  void arm_election_timer();
  void arm_heartbeat_timer();
  void cancel(std::optional<sb::TimerHandle>& t);

  sb::Host& host_;
  sb::Params params_;
  std::mt19937_64 rng_;

  bool initialized_ = false;
  bool stopped_ = false;
  Role role_ = Role::Follower;
  std::uint64_t term_ = 1;
  std::optional<NodeId> voted_for_;
  std::optional<NodeId> leader_;
  std::vector<RaftEntry> log_;
  std::uint64_t commit_index_ = 0;
  std::uint64_t applied_ = 0;
  std::set<NodeId> votes_;
  std::vector<std::uint64_t> next_index_;
  std::vector<std::uint64_t> match_index_;
  unsigned failed_terms_ = 0;
  bool suspected_sender_ = false;

  std::vector<bool> delivered_;
  std::size_t delivered_count_ = 0;
  std::set<std::int64_t> cast_slots_;

  std::optional<sb::TimerHandle> election_timer_;
  std::optional<sb::TimerHandle> heartbeat_timer_;
};

}  // namespace iss::raft
