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

#include "iss/reference_sb.hpp"

#include <algorithm>

namespace iss::reference {

IdealConsensus::IdealConsensus(std::vector<NodeId> correct) : correct_(std::move(correct)) {
  std::sort(correct_.begin(), correct_.end());
}

void IdealConsensus::attach(const InstanceKey& key, NodeId node, Decide fn) {
  auto& inst = instances_[key];
  inst.listeners[node] = fn;
  for (const auto& [sn, slot] : inst.slots) {
    if (slot.decision) fn(sn, *slot.decision);
  }
}

void IdealConsensus::detach(const InstanceKey& key, NodeId node) {
  auto it = instances_.find(key);
  if (it != instances_.end()) it->second.listeners.erase(node);
}

void IdealConsensus::propose(const InstanceKey& key, SeqNr sn, NodeId node, const Batch& value) {
  auto& inst = instances_[key];
  auto& slot = inst.slots[sn];
  if (slot.decision) return;
  slot.proposals.emplace(node, value);
  maybe_decide(inst, sn);
}

void IdealConsensus::maybe_decide(Instance& inst, SeqNr sn) {
  auto& slot = inst.slots[sn];
  if (correct_.empty()) return;
  for (NodeId c : correct_) {
    if (!slot.proposals.count(c)) return;
  }
  const Batch& first = slot.proposals.at(correct_.front());
  slot.decision = first;
  ++decisions_;
  const Batch decision = *slot.decision;
  auto listeners = inst.listeners;
  for (const auto& [node, fn] : listeners) fn(sn, decision);
}

ReferenceOrderer::ReferenceOrderer(sb::Host& host, sb::Params params, IdealConsensus* ideal)
    : host_(host), params_(std::move(params)), ideal_(ideal) {
  for (SeqNr sn : params_.seq_nrs) delivered_[sn] = false;
  if (ideal_) {
    // Decisions reach this node as local events.
    ideal_->attach(params_.key, host_.self(), [this](SeqNr sn, const Batch& v) {
      if (stopped_) return;
      auto h = host_.set_timer(0, [this, sn, v] { on_decide(sn, v); });
      pending_timers_.push_back(h);
    });
  } else {
    bc_ = std::make_unique<pbft::PbftOrderer>(host_, params_, this);
  }
}

ReferenceOrderer::~ReferenceOrderer() {
  if (ideal_) ideal_->detach(params_.key, host_.self());
}

bool ReferenceOrderer::in_segment(SeqNr sn) const {
  return std::binary_search(params_.seq_nrs.begin(), params_.seq_nrs.end(), sn);
}

ReferenceOrderer::Brb& ReferenceOrderer::brb_for(SeqNr sn) {
  auto it = brb_.find(sn);
  if (it == brb_.end()) {
    it = brb_.emplace(sn, Brb(params_.config->n, params_.config->f, params_.sender, BatchDigest{}))
             .first;
  }
  return it->second;
}

void ReferenceOrderer::init() {
  if (initialized_) throw sb::UsageError("SB instance initialized twice");
  initialized_ = true;
  if (bc_) bc_->init();
  // Values reliably delivered before init are proposed now.
  for (const auto& [sn, v] : brb_delivered_) propose(sn, v);
  if (host_.suspects(params_.sender)) {
    abort();
  } else {
    arm_quiet_timer();
  }
}

void ReferenceOrderer::arm_quiet_timer() {
  if (quiet_timer_) host_.cancel_timer(*quiet_timer_);
  quiet_timer_.reset();
  if (stopped_ || aborted_ || brb_delivered_.size() == params_.seq_nrs.size()) return;
  quiet_timer_ = host_.set_timer(params_.config->epoch_change_timeout, [this] {
    quiet_timer_.reset();
    if (!stopped_ && !aborted_ && brb_delivered_.size() < params_.seq_nrs.size()) abort();
  });
}

void ReferenceOrderer::cast(SeqNr sn, Batch batch) {
  if (host_.self() != params_.sender) throw sb::UsageError("cast by a node that is not the sender");
  if (!in_segment(sn)) throw sb::UsageError("cast for a sequence number outside the segment");
  if (stopped_) return;
  if (host_.behavior().equivocate && !batch.is_nil() && batch.size() > 0) {
    auto shorter = batch.requests();
    shorter.pop_back();
    const Batch other = Batch::of(std::move(shorter));
    for (NodeId j = 0; j < params_.config->n; ++j) {
      const bool first_group = j == host_.self() || j % 2 == host_.self() % 2;
      host_.send(j, BrbSend{sn, first_group ? batch : other});
    }
    return;
  }
  host_.broadcast(BrbSend{sn, std::move(batch)});
}

void ReferenceOrderer::on_message(NodeId from, const SbPayload& msg) {
  if (stopped_) return;
  if (const auto* m = std::get_if<BrbSend>(&msg)) {
    if (in_segment(m->tag)) apply(m->tag, brb_for(m->tag).on_send(from, m->value));
  } else if (const auto* m = std::get_if<BrbEcho>(&msg)) {
    if (in_segment(m->tag)) apply(m->tag, brb_for(m->tag).on_echo(from, m->value));
  } else if (const auto* m = std::get_if<BrbReady>(&msg)) {
    if (in_segment(m->tag)) apply(m->tag, brb_for(m->tag).on_ready(from, m->digest));
  } else if (bc_) {
    bc_->on_message(from, msg);
  }
}

void ReferenceOrderer::apply(SeqNr sn, const brb::Step<Batch>& step) {
  if (step.echo) host_.broadcast(BrbEcho{sn, *step.echo});
  if (step.ready) host_.broadcast(BrbReady{sn, *step.ready});
  if (step.deliver) {
    brb_delivered_.emplace(sn, *step.deliver);
    if (!step.deliver->is_nil()) host_.note_proposal(sn, *step.deliver);
    if (initialized_) {
      propose(sn, *step.deliver);
      arm_quiet_timer();
    }
    if (bc_) bc_->poke();
  }
}

void ReferenceOrderer::on_suspect(NodeId p) {
  if (p != params_.sender || !initialized_ || stopped_) return;
  abort();
}

void ReferenceOrderer::on_restore(NodeId) {}

void ReferenceOrderer::abort() {
  if (!aborted_) {
    aborted_ = true;
    host_.on_suspect_sender();
  }
  for (SeqNr sn : params_.seq_nrs) propose(sn, Batch::nil());
  if (bc_) bc_->poke();
}

void ReferenceOrderer::propose(SeqNr sn, const Batch& value) {
  if (proposed_.count(sn)) return;
  proposed_.emplace(sn, value);
  if (ideal_) {
    ideal_->propose(params_.key, sn, host_.self(), value);
  } else {
    bc_->poke();
  }
}

void ReferenceOrderer::on_decide(SeqNr sn, const Batch& value) {
  if (stopped_) return;
  auto it = delivered_.find(sn);
  if (it == delivered_.end() || it->second) return;
  it->second = true;
  ++delivered_count_;
  host_.deliver(sn, value);
}

std::optional<Batch> ReferenceOrderer::local_proposal(SeqNr sn) const {
  auto it = proposed_.find(sn);
  if (it == proposed_.end()) return std::nullopt;
  return it->second;
}

bool ReferenceOrderer::acceptable(SeqNr sn, const Batch& value) const {
  if (value.is_nil()) return aborted_ || host_.suspects(params_.sender);
  auto it = brb_delivered_.find(sn);
  return it != brb_delivered_.end() && it->second == value;
}

void ReferenceOrderer::decide(SeqNr sn, const Batch& value) { on_decide(sn, value); }

void ReferenceOrderer::stop() {
  stopped_ = true;
  for (auto h : pending_timers_) host_.cancel_timer(h);
  pending_timers_.clear();
  if (quiet_timer_) host_.cancel_timer(*quiet_timer_);
  quiet_timer_.reset();
  if (bc_) bc_->stop();
}

}  // namespace iss::reference
