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

#include "iss/node.hpp"

#include <algorithm>

#include "iss/checkpoint.hpp"
#include "iss/merkle.hpp"
#include "iss/pbft.hpp"
#include "iss/raft.hpp"

namespace iss {

namespace {

constexpr std::size_t kMaxEpochsPerTransfer = 16;

}  // namespace

// Per-instance view of the node handed to an SB orderer.
class IssNode::Instance final : public sb::Host {
 public:
  Instance(IssNode& node, Segment seg)
      : node_(node), seg_(std::move(seg)), key_{seg_.epoch, seg_.leader},
        alive_(std::make_shared<bool>(true)) {}
  ~Instance() override { *alive_ = false; }

  const Segment& segment() const { return seg_; }
  const InstanceKey& key() const { return key_; }
  sb::Orderer& orderer() { return *orderer_; }
  void set_orderer(std::unique_ptr<sb::Orderer> o) { orderer_ = std::move(o); }

  NodeId self() const override { return node_.id_; }
  SimTime now() const override { return node_.env_.sim.now(); }

  void send(NodeId to, SbPayload msg) override {
    node_.env_.net.send(node_.id_, to, SbMessage{key_, std::move(msg)});
  }

  void broadcast(SbPayload msg) override {
    auto shared = std::make_shared<const Payload>(SbMessage{key_, std::move(msg)});
    for (NodeId j = 0; j < node_.config_.n; ++j) node_.env_.net.send(node_.id_, j, shared);
  }

  sb::TimerHandle set_timer(SimTime delay, std::function<void()> fn) override {
    auto alive = alive_;
    return node_.env_.sim.schedule(delay, node_.id_, [alive, fn = std::move(fn)] {
      if (*alive) fn();
    });
  }

  void cancel_timer(sb::TimerHandle h) override { node_.env_.sim.cancel(h); }

  void deliver(SeqNr sn, const Batch& batch) override { node_.on_sb_deliver(*this, sn, batch); }

  sb::Validation validate(SeqNr sn, const Batch& batch, NodeId sender) override {
    return node_.validate(*this, sn, batch, sender);
  }

  void note_proposal(SeqNr sn, const Batch& batch) override { node_.note_proposal(sn, batch); }

  void on_suspect_sender() override {
    record(trace::SbSuspect{now(), node_.id_, key_, seg_.leader});
  }

  void record(trace::Event ev) override { node_.env_.recorder.record(std::move(ev)); }

  const crypto::SignatureScheme& signatures() const override { return node_.env_.sigs; }

  sb::Behavior behavior() const override {
    sb::Behavior b;
    b.equivocate = node_.equivocator_ && seg_.leader == node_.id_;
    b.straggle = node_.straggler_ && seg_.leader == node_.id_;
    return b;
  }

  bool suspects(NodeId p) const override {
    return node_.monitor_ && node_.monitor_->detector().suspects(p);
  }

 private:
  IssNode& node_;
  Segment seg_;
  InstanceKey key_;
  std::shared_ptr<bool> alive_;
  std::unique_ptr<sb::Orderer> orderer_;
};

IssNode::IssNode(NodeId id, NodeEnv env)
    : id_(id),
      env_(env),
      config_(env.scenario.node),
      layout_(config_.epoch_length),
      queues_(config_.num_buckets()),
      policy_(config_),
      validator_(config_, env.scenario.clients.count, env.sigs),
      committed_(env.scenario.clients.count) {
  if (config_.orderer == OrdererKind::Reference) {
    monitor_ = std::make_unique<fd::Monitor>(id_, config_, env_.sim, env_.net,
                                             [this](const fd::Event& e) { on_fd_event(e); });
  }
}

IssNode::~IssNode() {
  for (auto& [key, inst] : instances_) inst->orderer().stop();
}

void IssNode::start() {
  if (monitor_) monitor_->start();
  start_epoch(0);
  after_commit();
}

void IssNode::receive(ProcessId from, const Payload& msg) {
  if (crashed_) return;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RequestMsg>) {
          on_request(from, m);
        } else if (from >= config_.n) {
          return;
        } else if constexpr (std::is_same_v<T, SbMessage>) {
          on_sb_message(from, m);
        } else if constexpr (std::is_same_v<T, CheckpointMsg>) {
          on_checkpoint(from, m);
        } else if constexpr (std::is_same_v<T, StateRequestMsg>) {
          on_state_request(from, m);
        } else if constexpr (std::is_same_v<T, StateResponseMsg>) {
          on_state_response(from, m);
        } else if constexpr (std::is_same_v<T, HeartbeatMsg>) {
          if (monitor_) monitor_->on_heartbeat(from, m);
        } else if constexpr (std::is_same_v<T, BrbHeartbeatMsg>) {
          if (monitor_) monitor_->on_brb_heartbeat(from, m);
        }
      },
      msg);
}

void IssNode::crash() {
  if (crashed_) return;
  crashed_ = true;
  emit_fault(trace::FaultKind::Crash);
  env_.sim.crash(id_);
}

void IssNode::emit_fault(trace::FaultKind kind) {
  env_.recorder.record(trace::Fault{env_.sim.now(), id_, kind});
}

// ---------------------------------------------------------------------------
// Epochs

void IssNode::start_epoch(EpochNr e) {
  if (crashed_) return;
  if (crash_at_start_ && *crash_at_start_ == e) {
    crash();
    return;
  }
  current_ = e;
  if (layout_.known_epochs() == e) layout_.add_epoch(policy_.leaders());
  const auto range = layout_.seq_nrs(e);
  const auto& leaders = layout_.leaders(e);
  const auto now = env_.sim.now();

  segments_ = epoch_segments(e, layout_, config_.n, config_.num_buckets());
  trace::EpochStart start{now, id_, e, range.first, range.count, leaders, {}};
  for (const auto& s : segments_) start.segments.push_back({s.leader, s.seq_nrs, s.buckets});
  env_.recorder.record(std::move(start));

  own_segment_.reset();
  next_slot_ = 0;
  in_flight_ = 0;
  segment_start_ = now;
  std::vector<Instance*> created;
  for (const auto& s : segments_) {
    if (s.leader == id_) own_segment_ = s;
    auto inst = std::make_unique<Instance>(*this, s);
    sb::Params params{inst->key(), s.leader, s.seq_nrs, &config_};
    inst->set_orderer(make_orderer(*inst, std::move(params)));
    created.push_back(inst.get());
    instances_[inst->key()] = std::move(inst);
  }
  for (Instance* inst : created) {
    env_.recorder.record(trace::SbInit{now, id_, inst->key(), inst->segment().seq_nrs});
    inst->orderer().init();
  }

  for (NodeId c = 0; c < env_.scenario.clients.count; ++c) {
    env_.net.send(id_, client_process(config_, c), AssignmentMsg{e, leaders});
  }

  auto it = buffered_.find(e);
  if (it != buffered_.end()) {
    auto msgs = std::move(it->second);
    buffered_.erase(it);
    for (const auto& [from, m] : msgs) {
      if (current_ != e || crashed_) break;
      on_sb_message(from, m);
    }
  }

  arm_epoch_timer();
  try_propose();
}

std::unique_ptr<sb::Orderer> IssNode::make_orderer(Instance& inst, sb::Params params) {
  switch (config_.orderer) {
    case OrdererKind::Pbft:
      return std::make_unique<pbft::PbftOrderer>(inst, std::move(params));
    case OrdererKind::Raft:
      return std::make_unique<raft::RaftOrderer>(inst, std::move(params));
    case OrdererKind::Reference:
      return std::make_unique<reference::ReferenceOrderer>(
          inst, std::move(params),
          config_.consensus == ConsensusKind::Ideal ? env_.ideal : nullptr);
  }
  throw std::logic_error("unknown orderer");
}

void IssNode::after_commit() {
  if (in_after_commit_) {
    commit_dirty_ = true;
    return;
  }
  in_after_commit_ = true;
  do {
    commit_dirty_ = false;
    respond(log_.deliver_ready());
    while (!crashed_ && !limit_reached_ && completed_ == current_ &&
           layout_.known_epochs() > current_ && log_.covers(layout_.seq_nrs(current_))) {
      complete_epoch(current_);
      if (limit_reached_ || crashed_) break;
      start_epoch(current_ + 1);
      respond(log_.deliver_ready());
    }
  } while (commit_dirty_);
  in_after_commit_ = false;
}

void IssNode::complete_epoch(EpochNr e) {
  const auto now = env_.sim.now();
  env_.recorder.record(trace::EpochComplete{now, id_, e});
  if (propose_timer_) env_.sim.cancel(*propose_timer_);
  propose_timer_.reset();
  if (epoch_timer_) env_.sim.cancel(*epoch_timer_);
  epoch_timer_.reset();
  own_segment_.reset();

  policy_.epoch_committed(e, layout_, log_);

  for (ClientId c = 0; c < committed_.size(); ++c) {
    auto low = validator_.low(c);
    auto& ts = committed_[c];
    while (!ts.empty() && *ts.begin() == low) {
      ts.erase(ts.begin());
      ++low;
    }
    validator_.set_low(c, low);
  }

  const auto range = layout_.seq_nrs(e);
  if (range.empty()) {
    epoch_roots_.push_back(Digest{});
  } else {
    std::vector<Batch> entries;
    entries.reserve(range.count);
    for (SeqNr sn = range.first; sn < range.end(); ++sn) entries.push_back(*log_.at(sn));
    const Digest root = merkle::root_of(entries);
    epoch_roots_.push_back(root);
    Digest signed_root = root;
    if (wrong_checkpoints_) signed_root[0] ^= 0xFF;
    const auto sig = env_.sigs.sign(id_, checkpoint_digest(e, range.max(), signed_root));
    auto msg = std::make_shared<const Payload>(CheckpointMsg{e, range.max(), signed_root, sig});
    for (NodeId j = 0; j < config_.n; ++j) env_.net.send(id_, j, msg);
  }

  proposed_.erase(proposed_.begin(), proposed_.lower_bound(range.end()));
  completed_ = e + 1;
  if (config_.max_epochs && completed_ >= config_.max_epochs) limit_reached_ = true;

  // Instances may still be on the call stack; collect afterwards.
  env_.sim.schedule(0, id_, [this] { collect_garbage(); });
}

void IssNode::arm_epoch_timer() {
  if (epoch_timer_) env_.sim.cancel(*epoch_timer_);
  const EpochNr e = current_;
  epoch_timer_ = env_.sim.schedule(config_.epoch_change_timeout, id_, [this, e] {
    epoch_timer_.reset();
    if (completed_ > e || limit_reached_) return;
    request_transfer();
    arm_epoch_timer();
  });
}

// ---------------------------------------------------------------------------
// Proposing

void IssNode::try_propose() {
  if (proposing_ || crashed_ || installing_ || limit_reached_ || !own_segment_) return;
  proposing_ = true;
  const auto& seg = *own_segment_;
  while (own_segment_ && !crashed_) {
    if (next_slot_ >= seg.seq_nrs.size() || in_flight_ >= config_.max_in_flight) break;
    const auto now = env_.sim.now();
    SimTime earliest = last_cut_ + config_.min_batch_timeout;
    if (config_.batch_rate > 0) {
      const auto spacing =
          static_cast<SimTime>(static_cast<double>(segments_.size()) / config_.batch_rate * kSecond);
      earliest = std::max(earliest, last_cut_ + spacing);
    }
    if (straggler_) earliest = std::max(earliest, last_cut_ + config_.epoch_change_timeout / 2);
    if (now < earliest) {
      arm_propose_timer(earliest);
      break;
    }
    if (straggler_) {
      cast_next(Batch::of({}));
      continue;
    }
    const auto deadline = std::max(last_cut_, segment_start_) + config_.max_batch_timeout;
    if (queues_.pending(seg.buckets) >= config_.max_batch_size || now >= deadline) {
      cast_next(queues_.cut_batch(seg.buckets, config_.max_batch_size));
      continue;
    }
    arm_propose_timer(deadline);
    break;
  }
  proposing_ = false;
}

void IssNode::arm_propose_timer(SimTime at) {
  if (propose_timer_) env_.sim.cancel(*propose_timer_);
  propose_timer_ = env_.sim.schedule(at - env_.sim.now(), id_, [this] {
    propose_timer_.reset();
    try_propose();
  });
}

void IssNode::cast_next(Batch batch) {
  const auto seg = *own_segment_;
  const SeqNr sn = seg.seq_nrs[next_slot_];
  if (crash_before_last_ && *crash_before_last_ == current_ &&
      next_slot_ + 1 == seg.seq_nrs.size()) {
    crash();
    return;
  }
  ++next_slot_;
  ++in_flight_;
  last_cut_ = env_.sim.now();
  proposed_[sn] = batch;
  note_proposal(sn, batch);
  env_.recorder.record(
      trace::SbCast{env_.sim.now(), id_, InstanceKey{seg.epoch, id_}, sn, batch.digest()});
  auto it = instances_.find(InstanceKey{seg.epoch, id_});
  if (it != instances_.end()) it->second->orderer().cast(sn, std::move(batch));
}

// ---------------------------------------------------------------------------
// SB interface

void IssNode::on_sb_message(NodeId from, const SbMessage& m) {
  auto it = instances_.find(m.key);
  if (it != instances_.end()) {
    it->second->orderer().on_message(from, m.body);
    return;
  }
  const EpochNr e = m.key.epoch;
  if (e <= current_ || limit_reached_) return;
  if (e <= current_ + 2) buffered_[e].emplace_back(from, m);
  if (e >= current_ + 2) request_transfer();
}

void IssNode::on_sb_deliver(Instance& inst, SeqNr sn, const Batch& batch) {
  env_.recorder.record(trace::SbDeliver{env_.sim.now(), id_, inst.key(), sn, batch.is_nil(),
                                        batch.is_nil() ? nil_digest() : batch.digest()});
  commit(sn, batch);
  after_commit();
  try_propose();
}

sb::Validation IssNode::validate(const Instance& inst, SeqNr sn, const Batch& batch,
                                 NodeId sender) {
  const auto& seg = inst.segment();
  if (sender != seg.leader) return sb::Validation::reject(sb::RejectReason::NotSegmentLeader);
  if (batch.is_nil() || batch.size() > config_.max_batch_size)
    return sb::Validation::reject(sb::RejectReason::Malformed);
  std::set<RequestId> seen;
  for (const auto& r : batch.requests()) {
    if (!r || validator_.check(*r) != RequestValidator::Verdict::Ok)
      return sb::Validation::reject(sb::RejectReason::InvalidRequest);
    if (!seg.owns_bucket(bucket_of(r->id, config_.num_buckets())))
      return sb::Validation::reject(sb::RejectReason::ForeignBucket);
    auto fl = in_flight_ids_.find(r->id);
    if (!seen.insert(r->id).second || committed(r->id) ||
        (fl != in_flight_ids_.end() && fl->second != sn))
      return sb::Validation::reject(sb::RejectReason::Duplicate);
  }
  return sb::Validation::accept();
}

void IssNode::note_proposal(SeqNr sn, const Batch& batch) {
  if (log_.has(sn)) return;
  auto& ids = noted_[sn];
  for (const auto& id : ids) {
    auto it = in_flight_ids_.find(id);
    if (it != in_flight_ids_.end() && it->second == sn) in_flight_ids_.erase(it);
  }
  ids.clear();
  if (batch.is_nil()) return;
  for (const auto& r : batch.requests()) {
    if (in_flight_ids_.emplace(r->id, sn).second) ids.push_back(r->id);
  }
}

void IssNode::commit(SeqNr sn, const Batch& batch) {
  if (log_.has(sn)) {
    log_.commit(sn, batch);  // throws on disagreement
    return;
  }
  log_.commit(sn, batch);

  if (auto it = noted_.find(sn); it != noted_.end()) {
    for (const auto& id : it->second) {
      auto f = in_flight_ids_.find(id);
      if (f != in_flight_ids_.end() && f->second == sn) in_flight_ids_.erase(f);
    }
    noted_.erase(it);
  }
  if (!batch.is_nil()) {
    for (const auto& r : batch.requests()) {
      queues_.remove(r->id);
      queues_.forget(r->id);
      if (r->id.c < committed_.size() && r->id.t >= validator_.low(r->id.c))
        committed_[r->id.c].insert(r->id.t);
    }
  }

  if (auto it = proposed_.find(sn); it != proposed_.end()) {
    if (!(it->second == batch)) {
      queues_.resurrect(it->second, [this](const RequestId& id) { return committed(id); });
    }
    proposed_.erase(it);
    if (own_segment_ && own_segment_->owns(sn) && in_flight_ > 0) --in_flight_;
  }
}

// ---------------------------------------------------------------------------
// Requests and responses

void IssNode::on_request(ProcessId, const RequestMsg& m) {
  const auto& r = m.request;
  if (!r || validator_.check(*r) != RequestValidator::Verdict::Ok) return;
  if (committed(r->id) || in_flight_ids_.count(r->id) || queues_.contains(r->id)) return;
  queues_.add(r);
  if (own_segment_ && own_segment_->owns_bucket(bucket_of(r->id, config_.num_buckets())))
    try_propose();
}

bool IssNode::committed(const RequestId& id) const {
  if (id.c >= committed_.size()) return false;
  return id.t < validator_.low(id.c) || committed_[id.c].count(id.t) != 0;
}

void IssNode::respond(const std::vector<Delivery>& deliveries) {
  if (deliveries.empty()) return;
  const auto now = env_.sim.now();
  std::map<ClientId, std::vector<ResponseEntry>> per_client;
  auto flush = [&] {
    for (auto& [c, entries] : per_client) {
      const auto sig = env_.sigs.sign(id_, response_digest(id_, entries));
      env_.net.send(id_, client_process(config_, c), ResponseMsg{id_, std::move(entries), sig});
    }
    per_client.clear();
  };
  SeqNr batch_sn = deliveries.front().sn;
  for (const auto& d : deliveries) {
    if (d.sn != batch_sn) {
      flush();
      batch_sn = d.sn;
    }
    env_.recorder.record(
        trace::SmrDeliver{now, id_, d.snr, d.sn, d.request->id, d.request->digest});
    if (d.request->id.c < env_.scenario.clients.count)
      per_client[d.request->id.c].push_back({d.request->id, d.snr});
  }
  flush();
}

// ---------------------------------------------------------------------------
// Checkpoints and state transfer

void IssNode::on_checkpoint(NodeId from, const CheckpointMsg& m) {
  if (stable_.count(m.epoch)) return;
  if (!env_.sigs.verify(from, checkpoint_digest(m.epoch, m.max_sn, m.root), m.sig)) return;
  auto& votes = attestations_[m.epoch][{m.max_sn, m.root}];
  votes[from] = m.sig;
  if (votes.size() < config_.strong_quorum()) return;

  StableCheckpoint cp{m.epoch, m.max_sn, m.root, {}};
  for (const auto& [signer, sig] : votes) cp.signatures.push_back({signer, sig});
  env_.recorder.record(trace::CheckpointStable{env_.sim.now(), id_, m.epoch, m.root,
                                               static_cast<std::uint32_t>(votes.size())});
  stable_.emplace(m.epoch, std::move(cp));
  attestations_.erase(m.epoch);
  if (m.epoch < epoch_roots_.size() && epoch_roots_[m.epoch] != m.root)
    throw InvariantViolation("checkpoint divergence at epoch " + std::to_string(m.epoch));
  collect_garbage();
  if (m.epoch > completed_) request_transfer();
}

void IssNode::collect_garbage() {
  for (auto it = instances_.begin(); it != instances_.end();) {
    const EpochNr e = it->first.epoch;
    const bool empty = e < layout_.known_epochs() && layout_.seq_nrs(e).empty();
    if (e < completed_ && e < current_ && (stable_.count(e) || empty)) {
      it->second->orderer().stop();
      it = instances_.erase(it);
    } else {
      ++it;
    }
  }
  while (collected_ < completed_ && collected_ < current_ &&
         (stable_.count(collected_) || layout_.seq_nrs(collected_).empty()))
    ++collected_;
  buffered_.erase(buffered_.begin(), buffered_.upper_bound(current_));
}

std::optional<StableCheckpoint> IssNode::stable_checkpoint(EpochNr e) const {
  auto it = stable_.find(e);
  if (it == stable_.end()) return std::nullopt;
  return it->second;
}

void IssNode::request_transfer() {
  if (transfer_pending_ || crashed_ || limit_reached_ || config_.n < 2) return;
  const auto offset = 1 + transfer_attempt_ % (config_.n - 1);
  const auto peer = static_cast<NodeId>((id_ + offset) % config_.n);
  ++transfer_attempt_;
  transfer_pending_ = true;
  env_.net.send(id_, peer, StateRequestMsg{completed_});
  transfer_timer_ = env_.sim.schedule(config_.epoch_change_timeout, id_, [this] {
    transfer_timer_.reset();
    transfer_pending_ = false;
  });
}

void IssNode::on_state_request(NodeId from, const StateRequestMsg& m) {
  StateResponseMsg resp;
  for (EpochNr e = m.from_epoch; e < completed_ && resp.epochs.size() < kMaxEpochsPerTransfer;
       ++e) {
    const auto range = layout_.seq_nrs(e);
    auto cp = stable_.find(e);
    if (!range.empty() && cp == stable_.end()) break;
    EpochTransfer t;
    t.epoch = e;
    for (SeqNr sn = range.first; sn < range.end(); ++sn) t.entries.push_back(*log_.at(sn));
    if (cp != stable_.end()) t.checkpoint = cp->second;
    resp.epochs.push_back(std::move(t));
  }
  if (!resp.epochs.empty()) env_.net.send(id_, from, std::move(resp));
}

bool IssNode::verify_transfer(const EpochTransfer& t) const {
  if (t.epoch >= layout_.known_epochs()) return false;
  return checkpoint::verify_transfer(t, layout_.seq_nrs(t.epoch), config_, env_.sigs);
}

void IssNode::on_state_response(NodeId from, const StateResponseMsg& m) {
  if (transfer_timer_) env_.sim.cancel(*transfer_timer_);
  transfer_timer_.reset();
  transfer_pending_ = false;

  installing_ = true;
  std::optional<EpochNr> first, last;
  for (const auto& t : m.epochs) {
    if (t.epoch < completed_) continue;
    if (crashed_ || limit_reached_ || t.epoch != completed_ || t.epoch != current_) break;
    if (!verify_transfer(t)) {
      env_.recorder.record(
          trace::StateTransfer{env_.sim.now(), id_, from, t.epoch, t.epoch, false});
      installing_ = false;
      request_transfer();
      return;
    }
    const auto range = layout_.seq_nrs(t.epoch);
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      const SeqNr sn = range.first + i;
      if (log_.has(sn)) continue;
      const auto& b = t.entries[i];
      env_.recorder.record(trace::TransferInstall{env_.sim.now(), id_, t.epoch, sn, b.is_nil(),
                                                  b.is_nil() ? nil_digest() : b.digest()});
      commit(sn, b);
    }
    if (!range.empty()) stable_.emplace(t.epoch, t.checkpoint);
    if (!first) first = t.epoch;
    last = t.epoch;
    after_commit();
  }
  installing_ = false;
  if (first) {
    env_.recorder.record(trace::StateTransfer{env_.sim.now(), id_, from, *first, *last, true});
    env_.sim.schedule(0, id_, [this] { collect_garbage(); });
    try_propose();
  }
}

void IssNode::on_fd_event(const fd::Event& e) {
  if (crashed_) return;
  std::vector<Instance*> live;
  for (auto& [key, inst] : instances_) live.push_back(inst.get());
  for (Instance* inst : live) {
    if (e.kind == fd::Kind::Suspect) {
      inst->orderer().on_suspect(e.node);
    } else {
      inst->orderer().on_restore(e.node);
    }
  }
}

trace::FinalLog IssNode::final_log(EpochNr common_epochs) const {
  trace::FinalLog fl;
  fl.t = env_.sim.now();
  fl.node = id_;
  fl.completed_epochs = completed_;
  const EpochNr upto = std::min<EpochNr>(common_epochs, layout_.known_epochs());
  fl.extent = upto ? layout_.seq_nrs(upto - 1).end() : 0;
  fl.log_digest = crypto::sha256(log_.encode(0, fl.extent));
  fl.epoch_roots = epoch_roots_;
  return fl;
}

}  // namespace iss
