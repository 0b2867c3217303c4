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

#include "iss/pbft.hpp"

#include <algorithm>

namespace iss::pbft {

PbftOrderer::PbftOrderer(sb::Host& host, sb::Params params, ConsensusHooks* hooks)
    : host_(host),
      params_(std::move(params)),
      config_(*params_.config),
      hooks_(hooks),
      timeout_(config_.epoch_change_timeout) {
  slots_.reserve(params_.seq_nrs.size());
  for (SeqNr sn : params_.seq_nrs) {
    Slot s;
    s.sn = sn;
    slots_.push_back(std::move(s));
  }
}

PbftOrderer::~PbftOrderer() { disarm_timer(); }

NodeId PbftOrderer::primary(std::uint64_t view) const {
  return static_cast<NodeId>((params_.sender + view) % config_.n);
}

std::size_t PbftOrderer::quorum() const { return config_.strong_quorum(); }

PbftOrderer::Slot* PbftOrderer::slot(SeqNr sn) {
  auto it = std::lower_bound(params_.seq_nrs.begin(), params_.seq_nrs.end(), sn);
  if (it == params_.seq_nrs.end() || *it != sn) return nullptr;
  return &slots_[static_cast<std::size_t>(it - params_.seq_nrs.begin())];
}

void PbftOrderer::init() {
  if (initialized_) throw sb::UsageError("SB instance initialized twice");
  initialized_ = true;
  arm_liveness_timer();
  if (agreement_mode()) poke();
}

void PbftOrderer::cast(SeqNr sn, Batch batch) {
  if (host_.self() != params_.sender) throw sb::UsageError("cast by a node that is not the sender");
  if (!slot(sn)) throw sb::UsageError("cast for a sequence number outside the segment");
  if (stopped_ || view_ != 0 || changing_) return;

  PbftPrePrepare pp{0, sn, batch, batch.digest()};
  if (host_.behavior().equivocate && !batch.is_nil() && batch.size() > 0) {
    auto shorter = batch.requests();
    shorter.pop_back();
    PbftPrePrepare other{0, sn, Batch::of(std::move(shorter)), {}};
    other.digest = other.batch.digest();
    for (NodeId j = 0; j < config_.n; ++j) {
      const bool first_group = j == host_.self() || j % 2 == host_.self() % 2;
      host_.send(j, first_group ? pp : other);
    }
    return;
  }
  host_.broadcast(std::move(pp));
}

void PbftOrderer::on_message(NodeId from, const SbPayload& msg) {
  if (stopped_) return;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PbftPrePrepare>) {
          on_pre_prepare(from, m, false);
        } else if constexpr (std::is_same_v<T, PbftPrepare>) {
          on_prepare(from, m);
        } else if constexpr (std::is_same_v<T, PbftCommit>) {
          on_commit(from, m);
        } else if constexpr (std::is_same_v<T, PbftViewChange>) {
          on_view_change(from, m);
        } else if constexpr (std::is_same_v<T, PbftNewView>) {
          on_new_view(from, m);
        }
      },
      msg);
}

void PbftOrderer::stop() {
  stopped_ = true;
  disarm_timer();
}

void PbftOrderer::reject(SeqNr sn, sb::RejectReason reason) {
  host_.record(trace::ProposalRejected{host_.now(), host_.self(), params_.key, sn, reason});
}

void PbftOrderer::on_pre_prepare(NodeId from, const PbftPrePrepare& pp, bool from_new_view) {
  Slot* s = slot(pp.sn);
  if (!s) return;
  if (pp.view > view_) {
    future_.emplace_back(from, pp);
    return;
  }
  // Kept even when stale so a commit quorum can still be delivered.
  if (from == primary(pp.view) && pp.digest == pp.batch.digest()) {
    s->known.emplace(pp.digest, pp.batch);
    check_committed(*s);
    if (s->delivered) return;
  }
  if (pp.view < view_ || changing_ || from != primary(pp.view)) return;
  // Without agreement hooks, later views only carry values inside NEW-VIEW.
  if (!agreement_mode() && pp.view > 0 && !from_new_view) return;
  if (s->pre_prepare) return;
  if (pp.digest != pp.batch.digest()) {
    reject(pp.sn, sb::RejectReason::Malformed);
    return;
  }
  if (from != host_.self()) {
    if (agreement_mode()) {
      if (!hooks_->acceptable(pp.sn, pp.batch)) {
        s->deferred = pp;
        return;
      }
    } else if (!pp.batch.is_nil()) {
      auto v = host_.validate(pp.sn, pp.batch, from);
      if (!v.ok) {
        reject(pp.sn, v.reason);
        return;
      }
    }
  }
  accept_pre_prepare(*s, pp);
}

void PbftOrderer::accept_pre_prepare(Slot& s, const PbftPrePrepare& pp) {
  s.pre_prepare = pp;
  s.deferred.reset();
  s.known.emplace(pp.digest, pp.batch);
  if (!agreement_mode() && !pp.batch.is_nil()) host_.note_proposal(pp.sn, pp.batch);
  if (host_.self() != primary(pp.view)) {
    PbftPrepare p{pp.view, pp.sn, pp.digest, host_.self(), {}};
    p.sig = host_.signatures().sign(host_.self(),
                                    prepare_digest(params_.key, pp.view, pp.sn, pp.digest));
    host_.broadcast(std::move(p));
  }
  check_prepared(s);
}

void PbftOrderer::on_prepare(NodeId from, const PbftPrepare& p) {
  Slot* s = slot(p.sn);
  if (!s || from != p.sender || from == primary(p.view)) return;
  if (!host_.signatures().verify(from, prepare_digest(params_.key, p.view, p.sn, p.digest), p.sig))
    return;
  s->prepares[{p.view, p.digest}].emplace(from, p.sig);
  if (p.view == view_) check_prepared(*s);
}

void PbftOrderer::on_commit(NodeId from, const PbftCommit& c) {
  Slot* s = slot(c.sn);
  if (!s) return;
  s->commits[{c.view, c.digest}].insert(from);
  check_committed(*s);
}

void PbftOrderer::check_prepared(Slot& s) {
  if (!s.pre_prepare || s.pre_prepare->view != view_ || changing_) return;
  const auto& pp = *s.pre_prepare;
  const std::size_t needed = quorum() > 0 ? quorum() - 1 : 0;
  auto it = s.prepares.find({view_, pp.digest});
  const std::size_t have = it == s.prepares.end() ? 0 : it->second.size();
  if (have < needed) return;

  if (!s.cert || s.cert->view < view_) {
    PreparedCert cert{pp.sn, view_, pp.batch, pp.digest, {}};
    if (it != s.prepares.end()) {
      for (const auto& [sender, sig] : it->second) {
        if (cert.prepares.size() == needed) break;
        cert.prepares.push_back({sender, sig});
      }
    }
    s.cert = std::move(cert);
  }
  if (!s.commit_sent) {
    s.commit_sent = true;
    host_.broadcast(PbftCommit{view_, pp.sn, pp.digest});
  }
  check_committed(s);
}

void PbftOrderer::check_committed(Slot& s) {
  if (s.delivered) return;
  for (const auto& [key, senders] : s.commits) {
    if (senders.size() < quorum()) continue;
    if (s.cert && s.cert->view == key.first && s.cert->digest == key.second) {
      deliver(s, s.cert->batch);
      return;
    }
    if (auto k = s.known.find(key.second); k != s.known.end()) {
      deliver(s, k->second);
      return;
    }
  }
}

void PbftOrderer::deliver(Slot& s, const Batch& value) {
  s.delivered = true;
  ++delivered_count_;
  if (agreement_mode()) {
    hooks_->decide(s.sn, value);
  } else {
    host_.deliver(s.sn, value);
  }
  if (stopped_) return;
  if (!changing_) arm_liveness_timer();
}

// ---------------------------------------------------------------------------
// View change

void PbftOrderer::start_view_change(std::uint64_t target) {
  if (stopped_) return;
  if (changing_ ? target <= target_view_ : target <= view_) return;
  changing_ = true;
  target_view_ = target;
  if (!suspected_sender_ && !agreement_mode()) {
    suspected_sender_ = true;
    host_.on_suspect_sender();
  }
  host_.record(trace::ViewChange{host_.now(), host_.self(), params_.key, target});

  PbftViewChange vc{target, host_.self(), {}, {}};
  for (const auto& s : slots_) {
    if (s.cert) vc.prepared.push_back(*s.cert);
  }
  vc.sig = host_.signatures().sign(host_.self(), view_change_digest(params_.key, vc));
  host_.broadcast(std::move(vc));

  disarm_timer();
  timer_ = host_.set_timer(timeout_, [this] {
    timer_.reset();
    timeout_ *= 2;
    start_view_change(target_view_ + 1);
  });
}

bool PbftOrderer::valid_cert(const PreparedCert& cert) const {
  if (!std::binary_search(params_.seq_nrs.begin(), params_.seq_nrs.end(), cert.sn)) return false;
  if (cert.digest != cert.batch.digest()) return false;
  const std::size_t needed = quorum() > 0 ? quorum() - 1 : 0;
  std::set<NodeId> senders;
  const auto d = prepare_digest(params_.key, cert.view, cert.sn, cert.digest);
  for (const auto& p : cert.prepares) {
    if (p.sender >= config_.n || p.sender == primary(cert.view)) return false;
    if (!host_.signatures().verify(p.sender, d, p.sig)) return false;
    senders.insert(p.sender);
  }
  return senders.size() >= needed;
}

bool PbftOrderer::valid_view_change(NodeId from, const PbftViewChange& vc) const {
  if (vc.sender != from || from >= config_.n) return false;
  if (!host_.signatures().verify(from, view_change_digest(params_.key, vc), vc.sig)) return false;
  for (const auto& c : vc.prepared) {
    if (c.view >= vc.new_view || !valid_cert(c)) return false;
  }
  return true;
}

void PbftOrderer::on_view_change(NodeId from, const PbftViewChange& vc) {
  if (vc.new_view <= view_ || !valid_view_change(from, vc)) return;
  view_changes_[vc.new_view][from] = vc;

  // Join once f+1 nodes want a view beyond ours.
  const std::uint64_t current = changing_ ? target_view_ : view_;
  std::map<NodeId, std::uint64_t> lowest;
  for (const auto& [v, by_sender] : view_changes_) {
    if (v <= current) continue;
    for (const auto& [sender, _] : by_sender) lowest.emplace(sender, v);
  }
  if (lowest.size() >= config_.weak_quorum()) {
    std::uint64_t join = ~std::uint64_t{0};
    for (const auto& [_, v] : lowest) join = std::min(join, v);
    start_view_change(join);
  }
  maybe_send_new_view(vc.new_view);
}

std::map<SeqNr, const PreparedCert*> PbftOrderer::best_certs(
    const std::vector<PbftViewChange>& vcs) {
  std::map<SeqNr, const PreparedCert*> best;
  for (const auto& vc : vcs) {
    for (const auto& c : vc.prepared) {
      auto [it, inserted] = best.emplace(c.sn, &c);
      if (!inserted && c.view > it->second->view) it->second = &c;
    }
  }
  return best;
}

std::vector<PbftPrePrepare> PbftOrderer::new_view_proposals(
    std::uint64_t view, const std::vector<PbftViewChange>& vcs) const {
  const auto best = best_certs(vcs);
  std::vector<PbftPrePrepare> out;
  for (SeqNr sn : params_.seq_nrs) {
    if (auto it = best.find(sn); it != best.end()) {
      out.push_back({view, sn, it->second->batch, it->second->digest});
    } else if (!agreement_mode()) {
      out.push_back({view, sn, Batch::nil(), Batch::nil().digest()});
    } else if (auto mine = hooks_->local_proposal(sn)) {
      out.push_back({view, sn, *mine, mine->digest()});
    }
  }
  return out;
}

void PbftOrderer::maybe_send_new_view(std::uint64_t target) {
  if (primary(target) != host_.self() || new_view_sent_.count(target)) return;
  if (!changing_ || target_view_ != target) return;
  auto it = view_changes_.find(target);
  if (it == view_changes_.end() || it->second.size() < quorum()) return;

  PbftNewView nv{target, {}, {}};
  for (const auto& [sender, vc] : it->second) {
    if (nv.view_changes.size() == quorum()) break;
    nv.view_changes.push_back(vc);
  }
  nv.pre_prepares = new_view_proposals(target, nv.view_changes);
  new_view_sent_.insert(target);
  host_.broadcast(std::move(nv));
}

void PbftOrderer::on_new_view(NodeId from, const PbftNewView& nv) {
  if (nv.view <= view_ || from != primary(nv.view)) return;

  std::set<NodeId> senders;
  for (const auto& vc : nv.view_changes) {
    if (vc.new_view != nv.view || !valid_view_change(vc.sender, vc)) return;
    senders.insert(vc.sender);
  }
  if (senders.size() < quorum()) return;

  std::map<SeqNr, Digest> forced;
  for (const auto& [sn, cert] : best_certs(nv.view_changes)) forced.emplace(sn, cert->digest);

  std::set<SeqNr> seen;
  for (const auto& pp : nv.pre_prepares) {
    if (pp.view != nv.view || !slot(pp.sn) || !seen.insert(pp.sn).second) return;
    if (pp.digest != pp.batch.digest()) return;
    if (auto it = forced.find(pp.sn); it != forced.end()) {
      if (it->second != pp.digest) return;
    } else if (!agreement_mode() && !pp.batch.is_nil()) {
      return;
    }
  }
  for (const auto& [sn, _] : forced) {
    if (!seen.count(sn)) return;
  }
  if (!agreement_mode() && seen.size() != slots_.size()) return;

  enter_view(nv.view, nv.pre_prepares, forced);
}

void PbftOrderer::enter_view(std::uint64_t view, const std::vector<PbftPrePrepare>& pps,
                             const std::map<SeqNr, Digest>& forced) {
  view_ = view;
  changing_ = false;
  target_view_ = view;
  disarm_timer();
  proposed_.clear();
  for (auto& s : slots_) {
    s.pre_prepare.reset();
    s.deferred.reset();
    s.commit_sent = false;
  }
  view_changes_.erase(view_changes_.begin(), view_changes_.upper_bound(view));

  const NodeId leader = primary(view);
  for (const auto& pp : pps) {
    Slot& s = *slot(pp.sn);
    s.known.emplace(pp.digest, pp.batch);
    if (leader == host_.self()) proposed_.insert(pp.sn);
    if (forced.count(pp.sn) || !agreement_mode() || leader == host_.self() ||
        hooks_->acceptable(pp.sn, pp.batch)) {
      accept_pre_prepare(s, pp);
    } else {
      s.deferred = pp;
    }
  }

  auto pending = std::move(future_);
  future_.clear();
  for (const auto& [from, pp] : pending) {
    if (pp.view >= view) on_pre_prepare(from, pp, false);
  }

  for (auto& s : slots_) check_committed(s);
  if (agreement_mode()) propose_own_values();
  arm_liveness_timer();
}

// ---------------------------------------------------------------------------
// Agreement mode

void PbftOrderer::propose_own_values() {
  if (stopped_ || changing_ || primary(view_) != host_.self()) return;
  for (auto& s : slots_) {
    if (s.delivered || s.pre_prepare || proposed_.count(s.sn)) continue;
    auto mine = hooks_->local_proposal(s.sn);
    if (!mine) continue;
    proposed_.insert(s.sn);
    host_.broadcast(PbftPrePrepare{view_, s.sn, *mine, mine->digest()});
  }
}

void PbftOrderer::poke() {
  if (stopped_ || !agreement_mode()) return;
  if (!changing_) {
    for (auto& s : slots_) {
      if (!s.deferred || s.deferred->view != view_ || s.pre_prepare) continue;
      if (hooks_->acceptable(s.sn, s.deferred->batch)) {
        auto pp = *s.deferred;
        accept_pre_prepare(s, pp);
      }
    }
  }
  propose_own_values();
  if (!timer_) arm_liveness_timer();
}

// ---------------------------------------------------------------------------
// Timers

bool PbftOrderer::liveness_needed() const {
  if (!initialized_ || stopped_ || complete()) return false;
  if (!agreement_mode()) return true;
  for (const auto& s : slots_) {
    if (!s.delivered && hooks_->local_proposal(s.sn)) return true;
  }
  return false;
}

void PbftOrderer::arm_liveness_timer() {
  disarm_timer();
  if (changing_ || !liveness_needed()) return;
  timer_ = host_.set_timer(timeout_, [this] {
    timer_.reset();
    start_view_change(view_ + 1);
  });
}

void PbftOrderer::disarm_timer() {
  if (timer_) host_.cancel_timer(*timer_);
  timer_.reset();
}

}  // namespace iss::pbft
