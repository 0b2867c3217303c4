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

#include "iss/client.hpp"

#include <algorithm>

#include "iss/buckets.hpp"

namespace iss {

RequestValidator::RequestValidator(const NodeConfig& config, std::size_t num_clients,
                                   const crypto::SignatureScheme& sigs)
    : config_(config), sigs_(sigs), low_(num_clients, 0) {}

RequestValidator::Verdict RequestValidator::check(const Request& r) const {
  if (config_.validate_signatures) {
    if (Request::make(r.id, r.payload).digest != r.digest) return Verdict::BadSignature;
    if (r.id.c >= low_.size()) return Verdict::UnknownClient;
    if (!sigs_.verify(client_process(config_, r.id.c), r.digest, r.sig)) return Verdict::BadSignature;
  } else if (r.id.c >= low_.size()) {
    return Verdict::UnknownClient;
  }
  const auto low = low_[r.id.c];
  if (r.id.t < low || r.id.t >= low + config_.watermark_window) return Verdict::OutsideWindow;
  return Verdict::Ok;
}

std::vector<NodeId> bucket_leaders(EpochNr e, const std::vector<NodeId>& leaders,
                                   const NodeConfig& config) {
  std::vector<NodeId> out(config.num_buckets(), 0);
  for (NodeId l : leaders) {
    for (BucketId b : active_buckets(e, leaders, l, config.n, config.num_buckets())) out[b] = l;
  }
  return out;
}

Client::Client(ClientId id, const ScenarioConfig& scenario, sim::Simulator& sim,
               sim::Network& net, const crypto::SignatureScheme& sigs, Recorder& recorder)
    : id_(id),
      pid_(client_process(scenario.node, id)),
      scenario_(scenario),
      config_(scenario.node),
      sim_(sim),
      net_(net),
      sigs_(sigs),
      recorder_(recorder) {}

void Client::start() {
  const auto& cc = scenario_.clients;
  if (cc.rate <= 0 || cc.duration <= 0) {
    finished_ = true;
    return;
  }
  const auto period = static_cast<SimTime>(kSecond / cc.rate);
  const SimTime offset = cc.count ? period * static_cast<SimTime>(id_) / static_cast<SimTime>(cc.count) : 0;
  sim_.schedule(cc.start + offset, pid_, [this] { tick(); });
}

void Client::tick() {
  const auto& cc = scenario_.clients;
  if (sim_.now() >= cc.start + cc.duration) {
    finished_ = true;
    return;
  }
  Bytes payload(cc.payload_size);
  const std::uint64_t seed = id_ * 0x9E3779B97F4A7C15ULL ^ (submitted_ + queued_.size());
  for (std::size_t i = 0; i < payload.size(); ++i) {
    payload[i] = static_cast<std::uint8_t>((seed >> ((i % 8) * 8)) + i);
  }
  submit(std::move(payload));
  sim_.schedule(static_cast<SimTime>(kSecond / cc.rate), pid_, [this] { tick(); });
}

std::uint64_t Client::window_low() const {
  return pending_.empty() ? next_t_ : pending_.begin()->first;
}

RequestId Client::submit(Bytes payload) {
  if (next_t_ >= window_low() + config_.watermark_window) {
    queued_.push_back(std::move(payload));
    return RequestId{next_t_ + queued_.size() - 1, id_};
  }
  RequestId rid{next_t_++, id_};
  auto req = Request::make(rid, std::move(payload));
  req.sig = sigs_.sign(pid_, req.digest);
  auto ptr = std::make_shared<const Request>(std::move(req));
  pending_[rid.t] = Pending{ptr, {}};
  ++submitted_;
  recorder_.record(trace::ClientCast{sim_.now(), rid, ptr->digest});
  send(ptr);
  return rid;
}

void Client::drain_queue() {
  while (!queued_.empty() && next_t_ < window_low() + config_.watermark_window) {
    Bytes payload = std::move(queued_.front());
    queued_.erase(queued_.begin());
    submit(std::move(payload));
  }
}

std::vector<NodeId> Client::targets(const RequestId& id) const {
  std::vector<NodeId> out;
  if (!adopted_epoch_ || leaders_.empty()) {
    for (NodeId i = 0; i < config_.n; ++i) out.push_back(i);
    return out;
  }
  const BucketId b = bucket_of(id, config_.num_buckets());
  for (EpochNr e = *adopted_epoch_; e < *adopted_epoch_ + 3; ++e) {
    for (NodeId l : leaders_) {
      const auto buckets = active_buckets(e, leaders_, l, config_.n, config_.num_buckets());
      if (std::binary_search(buckets.begin(), buckets.end(), b)) {
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
        break;
      }
    }
  }
  return out;
}

void Client::send(const RequestPtr& r) {
  auto msg = std::make_shared<const Payload>(RequestMsg{r});
  for (NodeId node : targets(r->id)) net_.send(pid_, node, msg);
}

void Client::receive(ProcessId from, const Payload& msg) {
  if (from >= config_.n) return;
  if (const auto* m = std::get_if<ResponseMsg>(&msg)) {
    on_response(from, *m);
  } else if (const auto* m = std::get_if<AssignmentMsg>(&msg)) {
    on_assignment(from, *m);
  }
}

void Client::on_response(ProcessId from, const ResponseMsg& m) {
  if (m.node != from) return;
  if (!sigs_.verify(from, response_digest(m.node, m.entries), m.sig)) return;
  bool progressed = false;
  for (const auto& e : m.entries) {
    if (e.id.c != id_) continue;
    auto it = pending_.find(e.id.t);
    if (it == pending_.end()) continue;
    it->second.responders.insert(from);
    if (it->second.responders.size() >= config_.weak_quorum()) {
      recorder_.record(trace::ClientComplete{sim_.now(), e.id});
      pending_.erase(it);
      ++completed_;
      progressed = true;
    }
  }
  if (progressed) drain_queue();
}

void Client::on_assignment(ProcessId from, const AssignmentMsg& m) {
  if (adopted_epoch_ && m.epoch <= *adopted_epoch_) return;
  auto& voters = announcements_[{m.epoch, m.leaders}];
  voters.insert(from);
  if (voters.size() < config_.weak_quorum()) return;

  adopted_epoch_ = m.epoch;
  leaders_ = m.leaders;
  announcements_.erase(announcements_.begin(), announcements_.upper_bound({m.epoch, {~NodeId{0}}}));
  for (const auto& [t, p] : pending_) {
    ++resubmissions_;
    send(p.request);
  }
  drain_queue();
}

}  // namespace iss
