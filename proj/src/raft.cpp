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

#include "iss/raft.hpp"

#include <algorithm>

namespace iss::raft {

namespace {

std::uint64_t timer_seed(const InstanceKey& key, NodeId self) {
  crypto::Hasher h;
  h.add_u64(0x52414654ULL).add_u64(key.epoch).add_u64(key.leader).add_u64(self);
  auto d = h.finish();
  std::uint64_t s = 0;
  for (int i = 0; i < 8; ++i) s = (s << 8) | d[i];
  return s;
}

}  // namespace

RaftOrderer::RaftOrderer(sb::Host& host, sb::Params params)
    : host_(host),
      params_(std::move(params)),
      rng_(timer_seed(params_.key, host.self())),
      delivered_(params_.seq_nrs.size(), false) {}

RaftOrderer::~RaftOrderer() {
  cancel(election_timer_);
  cancel(heartbeat_timer_);
}

void RaftOrderer::init() {
  if (initialized_) throw sb::UsageError("SB instance initialized twice");
  initialized_ = true;
  term_ = 1;
  leader_ = params_.sender;
  voted_for_ = params_.sender;
  if (host_.self() == params_.sender) {
    become_leader();
  } else {
    role_ = Role::Follower;
    arm_election_timer();
  }
}

void RaftOrderer::cast(SeqNr sn, Batch batch) {
  if (host_.self() != params_.sender) throw sb::UsageError("cast by a node that is not the sender");
  auto it = std::lower_bound(params_.seq_nrs.begin(), params_.seq_nrs.end(), sn);
  if (it == params_.seq_nrs.end() || *it != sn)
    throw sb::UsageError("cast for a sequence number outside the segment");
  if (stopped_ || role_ != Role::Leader || term_ != 1) return;
  const auto slot = static_cast<std::int64_t>(it - params_.seq_nrs.begin());
  if (!cast_slots_.insert(slot).second) return;
  log_.push_back({term_, slot, std::move(batch)});
  match_index_[host_.self()] = last_index();
  replicate_all();
  advance_commit();
}

void RaftOrderer::on_message(NodeId from, const SbPayload& msg) {
  if (stopped_) return;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RaftAppend>) {
          on_append(from, m);
        } else if constexpr (std::is_same_v<T, RaftAppendResp>) {
          on_append_resp(from, m);
        } else if constexpr (std::is_same_v<T, RaftVote>) {
          on_vote(from, m);
        } else if constexpr (std::is_same_v<T, RaftVoteResp>) {
          on_vote_resp(from, m);
        }
      },
      msg);
}

void RaftOrderer::stop() {
  stopped_ = true;
  cancel(election_timer_);
  cancel(heartbeat_timer_);
}

void RaftOrderer::observe_term(std::uint64_t term) {
  if (term > term_) become_follower(term);
}

void RaftOrderer::become_follower(std::uint64_t term) {
  if (term > term_) {
    term_ = term;
    voted_for_.reset();
    leader_.reset();
  }
  if (term_ > 1 && !suspected_sender_) {
    suspected_sender_ = true;
    host_.on_suspect_sender();
  }
  role_ = Role::Follower;
  cancel(heartbeat_timer_);
  arm_election_timer();
}

void RaftOrderer::start_election() {
  if (role_ == Role::Candidate) ++failed_terms_;
  role_ = Role::Candidate;
  ++term_;
  if (!suspected_sender_) {
    suspected_sender_ = true;
    host_.on_suspect_sender();
  }
  voted_for_ = host_.self();
  leader_.reset();
  votes_ = {host_.self()};
  host_.broadcast(RaftVote{term_, last_index(), term_at(last_index())});
  arm_election_timer();
}

void RaftOrderer::become_leader() {
  role_ = Role::Leader;
  leader_ = host_.self();
  cancel(election_timer_);
  const std::size_t n = params_.config->n;
  next_index_.assign(n, last_index() + 1);
  match_index_.assign(n, 0);

  if (term_ > 1) {
    host_.record(trace::LeaderElected{host_.now(), host_.self(), params_.key, term_});
    std::vector<bool> present(params_.seq_nrs.size(), false);
    for (const auto& e : log_) {
      if (e.slot >= 0) present[static_cast<std::size_t>(e.slot)] = true;
    }
    log_.push_back({term_, -1, Batch::nil()});
    for (std::size_t s = 0; s < present.size(); ++s) {
      if (!present[s]) log_.push_back({term_, static_cast<std::int64_t>(s), Batch::nil()});
    }
  }
  match_index_[host_.self()] = last_index();
  replicate_all();
  advance_commit();
  arm_heartbeat_timer();
}

void RaftOrderer::replicate_to(NodeId peer) {
  RaftAppend m;
  m.term = term_;
  m.prev_index = next_index_[peer] - 1;
  m.prev_term = term_at(m.prev_index);
  m.leader_commit = commit_index_;
  for (std::uint64_t i = next_index_[peer]; i <= last_index(); ++i) m.entries.push_back(log_[i - 1]);
  host_.send(peer, std::move(m));
}

void RaftOrderer::replicate_all() {
  for (NodeId j = 0; j < params_.config->n; ++j) {
    if (j != host_.self()) replicate_to(j);
  }
}

void RaftOrderer::on_append(NodeId from, const RaftAppend& m) {
  if (m.term < term_) {
    host_.send(from, RaftAppendResp{term_, false, last_index()});
    return;
  }
  if (m.term > term_ || role_ != Role::Follower) become_follower(m.term);
  leader_ = from;
  failed_terms_ = 0;
  arm_election_timer();

  if (m.prev_index > last_index() || term_at(m.prev_index) != m.prev_term) {
    const auto hint = m.prev_index > last_index() ? last_index() : m.prev_index - 1;
    host_.send(from, RaftAppendResp{term_, false, hint});
    return;
  }
  std::uint64_t index = m.prev_index;
  for (const auto& e : m.entries) {
    ++index;
    if (index <= last_index()) {
      if (log_[index - 1].term == e.term) continue;
      if (index <= commit_index_) throw InvariantViolation("raft: truncating a committed entry");
      log_.resize(index - 1);
    }
    log_.push_back(e);
    if (!e.batch.is_nil()) host_.note_proposal(params_.seq_nrs[static_cast<std::size_t>(e.slot)], e.batch);
  }
  const std::uint64_t matched = m.prev_index + m.entries.size();
  if (m.leader_commit > commit_index_) {
    commit_index_ = std::min(m.leader_commit, matched);
    apply();
  }
  host_.send(from, RaftAppendResp{term_, true, matched});
}

void RaftOrderer::on_append_resp(NodeId from, const RaftAppendResp& m) {
  observe_term(m.term);
  if (role_ != Role::Leader || m.term != term_) return;
  if (m.success) {
    match_index_[from] = std::max(match_index_[from], m.match_index);
    next_index_[from] = std::max(next_index_[from], match_index_[from] + 1);
    advance_commit();
  } else {
    next_index_[from] = std::max<std::uint64_t>(1, std::min(next_index_[from], m.match_index + 1));
    replicate_to(from);
  }
}

void RaftOrderer::on_vote(NodeId from, const RaftVote& m) {
  observe_term(m.term);
  bool granted = false;
  if (m.term == term_ && (!voted_for_ || *voted_for_ == from)) {
    const auto my_last_term = term_at(last_index());
    const bool up_to_date = m.last_term > my_last_term ||
                            (m.last_term == my_last_term && m.last_index >= last_index());
    if (up_to_date) {
      granted = true;
      voted_for_ = from;
      arm_election_timer();
    }
  }
  host_.send(from, RaftVoteResp{term_, granted});
}

void RaftOrderer::on_vote_resp(NodeId from, const RaftVoteResp& m) {
  observe_term(m.term);
  if (role_ != Role::Candidate || m.term != term_ || !m.granted) return;
  votes_.insert(from);
  if (votes_.size() >= majority()) become_leader();
}

void RaftOrderer::advance_commit() {
  if (role_ != Role::Leader) return;
  for (std::uint64_t idx = last_index(); idx > commit_index_; --idx) {
    if (term_at(idx) != term_) break;
    std::size_t count = 0;
    for (auto mi : match_index_) count += mi >= idx ? 1 : 0;
    if (count >= majority()) {
      commit_index_ = idx;
      apply();
      replicate_all();
      break;
    }
  }
}

void RaftOrderer::apply() {
  while (applied_ < commit_index_) {
    const auto& e = log_[applied_++];
    if (e.slot < 0) continue;
    const auto s = static_cast<std::size_t>(e.slot);
    if (s >= delivered_.size() || delivered_[s]) continue;
    delivered_[s] = true;
    ++delivered_count_;
    host_.deliver(params_.seq_nrs[s], e.batch);
    if (stopped_) return;
  }
}

void RaftOrderer::arm_election_timer() {
  cancel(election_timer_);
  if (stopped_) return;
  const double mean = static_cast<double>(params_.config->mean_delay);
  std::uniform_real_distribution<double> u(2.0, 4.0);
  const double scale = static_cast<double>(1ULL << std::min(failed_terms_, 20u));
  const auto delay = static_cast<SimTime>(u(rng_) * mean * scale);
  election_timer_ = host_.set_timer(delay, [this] {
    election_timer_.reset();
    if (role_ != Role::Leader) start_election();
  });
}

void RaftOrderer::arm_heartbeat_timer() {
  cancel(heartbeat_timer_);
  if (stopped_) return;
  heartbeat_timer_ = host_.set_timer(std::max<SimTime>(1, params_.config->mean_delay / 2), [this] {
    heartbeat_timer_.reset();
    if (role_ != Role::Leader) return;
    replicate_all();
    arm_heartbeat_timer();
  });
}

void RaftOrderer::cancel(std::optional<sb::TimerHandle>& t) {
  if (t) host_.cancel_timer(*t);
  t.reset();
}

}  // namespace iss::raft
