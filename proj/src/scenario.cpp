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

#include "iss/scenario.hpp"

#include <algorithm>
#include <set>

#include "iss/client.hpp"
#include "iss/heartbeat.hpp"
#include "iss/node.hpp"
#include "iss/pbft.hpp"
#include "iss/raft.hpp"
#include "iss/recorder.hpp"
#include "iss/reference_sb.hpp"

namespace iss {

namespace {

std::unique_ptr<crypto::SignatureScheme> make_signatures(const ScenarioConfig& c,
                                                         std::uint64_t seed) {
  const std::size_t processes = c.node.n + c.clients.count;
  if (c.node.signatures == SignatureKind::Ed25519) return crypto::make_ed25519_scheme(seed, processes);
  return crypto::make_mac_scheme(seed, processes);
}

sim::NetworkParams network_params(const ScenarioConfig& c) {
  sim::NetworkParams p;
  p.mean_delay = c.network.mean_delay;
  p.jitter = c.network.jitter;
  p.gst = c.network.gst;
  p.pre_gst_factor = c.network.pre_gst_factor;
  p.egress_bytes_per_sec = c.network.egress_bandwidth;
  p.nodes = c.node.n;
  return p;
}

std::vector<NodeId> faulty_nodes(const ScenarioConfig& c) {
  std::set<NodeId> out;
  for (const auto& f : c.faults) {
    if (f.type != FaultType::Partition) out.insert(f.node);
  }
  return {out.begin(), out.end()};
}

std::vector<NodeId> correct_nodes(const ScenarioConfig& c) {
  const auto faulty = faulty_nodes(c);
  std::vector<NodeId> out;
  for (NodeId i = 0; i < c.node.n; ++i) {
    if (!std::binary_search(faulty.begin(), faulty.end(), i)) out.push_back(i);
  }
  return out;
}

trace::RunInfo run_info(const ScenarioConfig& c, std::uint64_t seed, bool sb_only) {
  trace::RunInfo info;
  info.seed = seed;
  info.n = static_cast<std::uint32_t>(c.node.n);
  info.f = static_cast<std::uint32_t>(c.node.f);
  info.byzantine_model = c.node.fault_model == FaultModel::Byzantine;
  info.orderer = std::string(to_string(c.node.orderer));
  info.policy = std::string(to_string(c.node.policy));
  info.epoch_length = c.node.epoch_length;
  info.num_buckets = c.node.num_buckets();
  info.leader_set_size = static_cast<std::uint32_t>(c.node.effective_leader_set_size());
  info.clients = static_cast<std::uint32_t>(sb_only ? 0 : c.clients.count);
  info.max_epochs = c.node.max_epochs;
  info.sb_only = sb_only;
  info.compact = c.trace_detail == TraceDetail::Compact;
  info.liveness_margin = static_cast<std::uint64_t>(c.effective_liveness_margin());
  info.faulty = faulty_nodes(c);
  return info;
}

// Time after which the network and the fault schedule are quiet.
SimTime stabilization(const ScenarioConfig& c) {
  SimTime t = c.network.gst;
  for (const auto& f : c.faults) {
    if (f.type == FaultType::Partition) t = std::max(t, f.until);
  }
  return t;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const auto& nc = config.node;
  const auto correct = correct_nodes(config);

  sim::Simulator sim;
  sim::Network net(sim, network_params(config), seed);
  const auto sigs = make_signatures(config, seed);
  Recorder recorder(config.trace_detail, correct.empty() ? 0 : correct.front());
  recorder.record(run_info(config, seed, false));
  reference::IdealConsensus ideal(correct);

  std::vector<std::unique_ptr<IssNode>> nodes;
  for (NodeId i = 0; i < nc.n; ++i) {
    nodes.push_back(std::make_unique<IssNode>(i, NodeEnv{sim, net, *sigs, recorder, config, &ideal}));
    net.attach(i, nodes.back().get());
  }
  std::vector<std::unique_ptr<Client>> clients;
  for (ClientId c = 0; c < config.clients.count; ++c) {
    clients.push_back(std::make_unique<Client>(c, config, sim, net, *sigs, recorder));
    net.attach(client_process(nc, c), clients.back().get());
  }

  auto mark = [&](NodeId node, trace::FaultKind kind) {
    recorder.record(trace::Fault{sim.now(), node, kind});
  };
  for (const auto& f : config.faults) {
    IssNode& node = *nodes.at(f.node);
    switch (f.type) {
      case FaultType::Crash:
        if (f.trigger == TriggerType::EpochStart) {
          node.crash_at_epoch_start(f.epoch);
        } else if (f.trigger == TriggerType::EpochEnd) {
          node.crash_before_last_proposal(f.epoch);
        } else {
          sim.schedule(f.at, sim::kNoOwner, [&node] { node.crash(); });
        }
        break;
      case FaultType::Straggler:
        sim.schedule(f.at, sim::kNoOwner, [&node, mark] {
          node.set_straggler(true);
          mark(node.id(), trace::FaultKind::Straggler);
        });
        break;
      case FaultType::Equivocator:
        sim.schedule(f.at, sim::kNoOwner, [&node, mark] {
          node.set_equivocator(true);
          mark(node.id(), trace::FaultKind::Equivocator);
        });
        break;
      case FaultType::WrongCheckpoint:
        sim.schedule(f.at, sim::kNoOwner, [&node, mark] {
          node.set_wrong_checkpoints(true);
          mark(node.id(), trace::FaultKind::WrongCheckpoint);
        });
        break;
      case FaultType::Partition: {
        net.add_partition(sim::Partition{{f.node}, f.at, f.until});
        const NodeId id = f.node;
        sim.schedule(f.at, sim::kNoOwner, [id, mark] { mark(id, trace::FaultKind::PartitionStart); });
        sim.schedule(f.until, sim::kNoOwner, [id, mark] { mark(id, trace::FaultKind::PartitionEnd); });
        break;
      }
    }
  }

  for (auto& n : nodes) sim.schedule(0, n->id(), [p = n.get()] { p->start(); });
  for (auto& c : clients) sim.schedule(0, client_process(nc, c->id()), [p = c.get()] { p->start(); });

  auto done = [&] {
    if (nc.max_epochs) {
      for (NodeId i : correct) {
        if (!nodes[i]->reached_epoch_limit()) return false;
      }
      return true;
    }
    if (clients.empty()) return false;
    std::uint64_t submitted = 0;
    for (const auto& c : clients) {
      if (!c->finished_submitting() || c->pending() != 0) return false;
      submitted += c->submitted();
    }
    for (NodeId i : correct) {
      if (nodes[i]->delivered_requests() < submitted) return false;
    }
    return true;
  };

  RunResult result;
  auto& stats = result.stats;
  try {
    sim.run_until(config.horizon, done);
    stats.completed = done();
  } catch (const InvariantViolation& e) {
    stats.violation = e.what();
  }
  stats.end_time = sim.now();
  stats.liveness_evaluable =
      !stats.violation &&
      (stats.completed || stats.end_time >= stabilization(config) + config.effective_liveness_margin());
  stats.events = sim.events_processed();
  stats.messages = net.messages_sent();
  stats.bytes = net.bytes_sent();
  for (const auto& c : clients) {
    stats.submitted += c->submitted();
    stats.client_completed += c->completed();
  }

  EpochNr common = ~EpochNr{0};
  for (NodeId i : correct) common = std::min(common, nodes[i]->completed_epochs());
  if (correct.empty()) common = 0;
  stats.min_completed_epochs = common;
  if (!stats.violation) {
    for (const auto& n : nodes) {
      if (!n->crashed()) recorder.record(n->final_log(common));
    }
  }
  recorder.record(trace::RunEnd{stats.end_time, stats.liveness_evaluable, stats.completed});
  result.trace = recorder.take();
  return result;
}

// ---------------------------------------------------------------------------
// Single-instance SB harness

namespace {

class SbNode final : public sim::Process, public sb::Host {
 public:
  SbNode(NodeId id, const ScenarioConfig& config, sim::Simulator& sim, sim::Network& net,
         const crypto::SignatureScheme& sigs, Recorder& recorder,
         reference::IdealConsensus* ideal)
      : id_(id), config_(config), sim_(sim), net_(net), sigs_(sigs), recorder_(recorder) {
    sb::Params params;
    params.key = kKey;
    params.sender = 0;
    params.seq_nrs = SnRange{0, config.node.epoch_length}.to_vector();
    params.config = &config.node;
    switch (config.node.orderer) {
      case OrdererKind::Pbft:
        orderer_ = std::make_unique<pbft::PbftOrderer>(*this, params);
        break;
      case OrdererKind::Raft:
        orderer_ = std::make_unique<raft::RaftOrderer>(*this, params);
        break;
      case OrdererKind::Reference:
        monitor_ = std::make_unique<fd::Monitor>(id_, config.node, sim, net, [this](const fd::Event& e) {
          if (!initialized_) return;
          if (e.kind == fd::Kind::Suspect) {
            orderer_->on_suspect(e.node);
          } else {
            orderer_->on_restore(e.node);
          }
        });
        orderer_ = std::make_unique<reference::ReferenceOrderer>(
            *this, params, config.node.consensus == ConsensusKind::Ideal ? ideal : nullptr);
        break;
    }
    seq_nrs_ = params.seq_nrs;
  }

  ~SbNode() override { orderer_->stop(); }

  void start() override {
    if (monitor_) monitor_->start();
    recorder_.record(trace::SbInit{sim_.now(), id_, kKey, seq_nrs_});
    initialized_ = true;
    orderer_->init();
    if (id_ == 0) schedule_cast();
  }

  void receive(ProcessId from, const Payload& msg) override {
    if (from >= config_.node.n) return;
    if (const auto* m = std::get_if<SbMessage>(&msg)) {
      orderer_->on_message(static_cast<NodeId>(from), m->body);
    } else if (const auto* m = std::get_if<HeartbeatMsg>(&msg)) {
      if (monitor_) monitor_->on_heartbeat(static_cast<NodeId>(from), *m);
    } else if (const auto* m = std::get_if<BrbHeartbeatMsg>(&msg)) {
      if (monitor_) monitor_->on_brb_heartbeat(static_cast<NodeId>(from), *m);
    }
  }

  bool complete() const { return orderer_->complete(); }
  void set_equivocator() { equivocator_ = true; }
  void crash() {
    if (crashed_) return;
    crashed_ = true;
    recorder_.record(trace::Fault{sim_.now(), id_, trace::FaultKind::Crash});
    sim_.crash(id_);
  }

  // sb::Host
  NodeId self() const override { return id_; }
  SimTime now() const override { return sim_.now(); }
  void send(NodeId to, SbPayload msg) override { net_.send(id_, to, SbMessage{kKey, std::move(msg)}); }
  void broadcast(SbPayload msg) override {
    auto shared = std::make_shared<const Payload>(SbMessage{kKey, std::move(msg)});
    for (NodeId j = 0; j < config_.node.n; ++j) net_.send(id_, j, shared);
  }
  sb::TimerHandle set_timer(SimTime delay, std::function<void()> fn) override {
    return sim_.schedule(delay, id_, std::move(fn));
  }
  void cancel_timer(sb::TimerHandle h) override { sim_.cancel(h); }
  void deliver(SeqNr sn, const Batch& batch) override {
    recorder_.record(trace::SbDeliver{sim_.now(), id_, kKey, sn, batch.is_nil(),
                                      batch.is_nil() ? nil_digest() : batch.digest()});
  }
  sb::Validation validate(SeqNr, const Batch& batch, NodeId sender) override {
    if (sender != 0) return sb::Validation::reject(sb::RejectReason::NotSegmentLeader);
    if (batch.is_nil()) return sb::Validation::reject(sb::RejectReason::Malformed);
    return sb::Validation::accept();
  }
  void note_proposal(SeqNr, const Batch&) override {}
  void on_suspect_sender() override {
    recorder_.record(trace::SbSuspect{sim_.now(), id_, kKey, 0});
  }
  void record(trace::Event ev) override { recorder_.record(std::move(ev)); }
  const crypto::SignatureScheme& signatures() const override { return sigs_; }
  sb::Behavior behavior() const override { return {equivocator_ && id_ == 0, false}; }
  bool suspects(NodeId p) const override { return monitor_ && monitor_->detector().suspects(p); }

 private:
  static constexpr InstanceKey kKey{0, 0};

  void schedule_cast() {
    sim_.schedule(config_.node.max_batch_timeout, id_, [this] {
      if (next_ >= seq_nrs_.size()) return;
      const SeqNr sn = seq_nrs_[next_++];
      std::vector<RequestPtr> reqs;
      const std::size_t size = std::max<std::size_t>(2, std::min<std::size_t>(4, config_.node.max_batch_size));
      for (std::size_t i = 0; i < size; ++i) {
        Bytes payload{static_cast<std::uint8_t>(sn), static_cast<std::uint8_t>(i)};
        reqs.push_back(std::make_shared<const Request>(Request::make(RequestId{sn * size + i, 0}, payload)));
      }
      Batch b = Batch::of(std::move(reqs));
      recorder_.record(trace::SbCast{sim_.now(), id_, kKey, sn, b.digest()});
      orderer_->cast(sn, std::move(b));
      schedule_cast();
    });
  }

  NodeId id_;
  const ScenarioConfig& config_;
  sim::Simulator& sim_;
  sim::Network& net_;
  const crypto::SignatureScheme& sigs_;
  Recorder& recorder_;
  std::unique_ptr<fd::Monitor> monitor_;
  std::unique_ptr<sb::Orderer> orderer_;
  std::vector<SeqNr> seq_nrs_;
  std::size_t next_ = 0;
  bool initialized_ = false;
  bool crashed_ = false;
  bool equivocator_ = false;
};

}  // namespace

RunResult run_sb(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const auto& nc = config.node;
  const auto correct = correct_nodes(config);

  sim::Simulator sim;
  sim::Network net(sim, network_params(config), seed);
  const auto sigs = make_signatures(config, seed);
  Recorder recorder;
  recorder.record(run_info(config, seed, true));
  reference::IdealConsensus ideal(correct);

  std::vector<std::unique_ptr<SbNode>> nodes;
  for (NodeId i = 0; i < nc.n; ++i) {
    nodes.push_back(std::make_unique<SbNode>(i, config, sim, net, *sigs, recorder, &ideal));
    net.attach(i, nodes.back().get());
  }
  for (const auto& f : config.faults) {
    SbNode& node = *nodes.at(f.node);
    if (f.type == FaultType::Crash) {
      sim.schedule(f.trigger == TriggerType::Time ? f.at : 0, sim::kNoOwner, [&node] { node.crash(); });
    } else if (f.type == FaultType::Equivocator) {
      node.set_equivocator();
      recorder.record(trace::Fault{0, f.node, trace::FaultKind::Equivocator});
    } else if (f.type == FaultType::Partition) {
      net.add_partition(sim::Partition{{f.node}, f.at, f.until});
    }
  }
  for (auto& n : nodes) sim.schedule(0, n->self(), [p = n.get()] { p->start(); });

  auto done = [&] {
    for (NodeId i : correct) {
      if (!nodes[i]->complete()) return false;
    }
    return true;
  };

  RunResult result;
  auto& stats = result.stats;
  try {
    sim.run_until(config.horizon, done);
    stats.completed = done();
  } catch (const InvariantViolation& e) {
    stats.violation = e.what();
  }
  stats.end_time = sim.now();
  stats.liveness_evaluable =
      !stats.violation &&
      (stats.completed || stats.end_time >= stabilization(config) + config.effective_liveness_margin());
  stats.events = sim.events_processed();
  stats.messages = net.messages_sent();
  stats.bytes = net.bytes_sent();
  recorder.record(trace::RunEnd{stats.end_time, stats.liveness_evaluable, stats.completed});
  result.trace = recorder.take();
  return result;
}

}  // namespace iss
