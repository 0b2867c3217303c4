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

#include "iss/checker.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "iss/buckets.hpp"

namespace iss::check {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::NotEvaluable:
      return "NOT-EVALUABLE";
  }
  return "?";
}

bool Report::ok() const {
  return std::none_of(results.begin(), results.end(),
                      [](const PropertyResult& r) { return r.verdict == Verdict::Fail; });
}

const PropertyResult* Report::find(std::string_view name) const {
  for (const auto& r : results) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

Verdict Report::verdict(std::string_view name) const {
  const auto* r = find(name);
  return r ? r->verdict : Verdict::NotEvaluable;
}

namespace {

using namespace trace;

std::string hex8(const Digest& d) { return to_hex(std::span<const std::uint8_t>(d.data(), 4)); }

std::string where(const InstanceKey& k, SeqNr sn) {
  return fmt::format("(epoch {}, leader {}, sn {})", k.epoch, k.leader, sn);
}

// Trace contents indexed for the property checks.
struct Index {
  const RunInfo* info = nullptr;
  const RunEnd* end = nullptr;
  std::set<NodeId> faulty;
  SimTime last_time = 0;

  std::vector<const ClientCast*> casts;
  std::map<RequestId, const ClientCast*> cast_by_id;
  std::vector<const EpochStart*> epoch_starts;
  std::vector<const EpochComplete*> epoch_completes;
  std::vector<const SbInit*> inits;
  std::vector<const SbCast*> sb_casts;
  std::vector<const SbDeliver*> sb_delivers;
  std::vector<const SbSuspect*> suspects;
  std::vector<const TransferInstall*> installs;
  std::vector<const SmrDeliver*> smr;
  std::vector<const FinalLog*> final_logs;

  bool correct(NodeId n) const { return info && n < info->n && !faulty.count(n); }
  bool liveness() const { return end && end->liveness_evaluable; }
  SimTime end_time() const { return end ? end->t : last_time; }
  /// Requests cast before this are owed; a run that reached its stop
  /// condition owes its whole workload.
  SimTime workload_cutoff() const { return end && end->completed ? end->t : cutoff(); }
  SimTime cutoff() const {
    const auto margin = static_cast<SimTime>(info->liveness_margin);
    return end_time() - margin;
  }
};

Index build_index(const Trace& trace) {
  Index ix;
  for (const auto& ev : trace) {
    ix.last_time = std::max(ix.last_time, time_of(ev));
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, RunInfo>) {
            if (!ix.info) {
              ix.info = &e;
              ix.faulty.insert(e.faulty.begin(), e.faulty.end());
            }
          } else if constexpr (std::is_same_v<T, RunEnd>) {
            ix.end = &e;
          } else if constexpr (std::is_same_v<T, ClientCast>) {
            ix.casts.push_back(&e);
            ix.cast_by_id.emplace(e.id, &e);
          } else if constexpr (std::is_same_v<T, EpochStart>) {
            ix.epoch_starts.push_back(&e);
          } else if constexpr (std::is_same_v<T, EpochComplete>) {
            ix.epoch_completes.push_back(&e);
          } else if constexpr (std::is_same_v<T, SbInit>) {
            ix.inits.push_back(&e);
          } else if constexpr (std::is_same_v<T, SbCast>) {
            ix.sb_casts.push_back(&e);
          } else if constexpr (std::is_same_v<T, SbDeliver>) {
            ix.sb_delivers.push_back(&e);
          } else if constexpr (std::is_same_v<T, SbSuspect>) {
            ix.suspects.push_back(&e);
          } else if constexpr (std::is_same_v<T, TransferInstall>) {
            ix.installs.push_back(&e);
          } else if constexpr (std::is_same_v<T, SmrDeliver>) {
            ix.smr.push_back(&e);
          } else if constexpr (std::is_same_v<T, FinalLog>) {
            ix.final_logs.push_back(&e);
          }
        },
        ev);
  }
  return ix;
}

PropertyResult pass(std::string name) { return {std::move(name), Verdict::Pass, {}}; }
PropertyResult fail(std::string name, std::string detail) {
  return {std::move(name), Verdict::Fail, std::move(detail)};
}
PropertyResult not_evaluable(std::string name, std::string detail) {
  return {std::move(name), Verdict::NotEvaluable, std::move(detail)};
}

// ---------------------------------------------------------------------------
// SB properties

PropertyResult sb1(const Index& ix) {
  std::set<std::tuple<InstanceKey, SeqNr, Digest>> casts;
  for (const auto* c : ix.sb_casts) {
    if (c->node == c->key.leader) casts.emplace(c->key, c->sn, c->digest);
  }
  for (const auto* d : ix.sb_delivers) {
    if (d->nil || !ix.correct(d->node) || !ix.correct(d->key.leader)) continue;
    if (!casts.count({d->key, d->sn, d->digest}))
      return fail("SB1", fmt::format("node {} delivered {} {} never cast by the leader", d->node,
                                     hex8(d->digest), where(d->key, d->sn)));
  }
  return pass("SB1");
}

PropertyResult sb2(const Index& ix) {
  struct Seen {
    Digest digest;
    NodeId node;
    InstanceKey key;
  };
  std::map<SeqNr, Seen> first;
  std::map<SeqNr, InstanceKey> key_of;
  for (const auto* d : ix.sb_delivers) key_of.emplace(d->sn, d->key);
  auto visit = [&](NodeId node, SeqNr sn, const Digest& digest, InstanceKey key) -> std::string {
    auto [it, fresh] = first.emplace(sn, Seen{digest, node, key});
    if (fresh || it->second.digest == digest) return {};
    return fmt::format("nodes {} and {} delivered {} and {} at {}", it->second.node, node,
                       hex8(it->second.digest), hex8(digest), where(it->second.key, sn));
  };
  for (const auto* d : ix.sb_delivers) {
    if (!ix.correct(d->node)) continue;
    if (auto err = visit(d->node, d->sn, d->digest, d->key); !err.empty()) return fail("SB2", err);
  }
  for (const auto* t : ix.installs) {
    if (!ix.correct(t->node)) continue;
    InstanceKey key{t->epoch, 0};
    if (auto it = key_of.find(t->sn); it != key_of.end()) key = it->second;
    if (auto err = visit(t->node, t->sn, t->digest, key); !err.empty()) return fail("SB2", err);
  }
  return pass("SB2");
}

PropertyResult sb3(const Index& ix) {
  if (!ix.liveness()) return not_evaluable("SB3", "run ended before stabilization plus margin");
  const auto cutoff = ix.cutoff();
  std::set<std::pair<NodeId, SeqNr>> done;
  // In full runs an epoch may legitimately still be in flight at the end;
  // a slot is owed once some correct node delivered it before the cutoff.
  std::set<SeqNr> settled;
  auto note = [&](NodeId node, SeqNr sn, SimTime t) {
    done.emplace(node, sn);
    if (ix.correct(node) && t <= cutoff) settled.insert(sn);
  };
  for (const auto* d : ix.sb_delivers) note(d->node, d->sn, d->t);
  for (const auto* t : ix.installs) note(t->node, t->sn, t->t);
  for (const auto* in : ix.inits) {
    if (!ix.correct(in->node) || in->t > cutoff) continue;
    for (SeqNr sn : in->seq_nrs) {
      if (!ix.info->sb_only && !settled.count(sn)) continue;
      if (!done.count({in->node, sn}))
        return fail("SB3", fmt::format("node {} never delivered {}", in->node, where(in->key, sn)));
    }
  }
  return pass("SB3");
}

PropertyResult sb4(const Index& ix) {
  std::map<std::pair<NodeId, InstanceKey>, SimTime> init_time;
  for (const auto* in : ix.inits) init_time.emplace(std::make_pair(in->node, in->key), in->t);
  std::map<InstanceKey, SimTime> first_suspect;
  for (const auto* s : ix.suspects) {
    if (!ix.correct(s->node)) continue;
    auto it = init_time.find({s->node, s->key});
    if (it == init_time.end() || s->t < it->second) continue;
    auto [f, fresh] = first_suspect.emplace(s->key, s->t);
    if (!fresh) f->second = std::min(f->second, s->t);
  }
  for (const auto* d : ix.sb_delivers) {
    if (!d->nil || !ix.correct(d->node)) continue;
    auto it = first_suspect.find(d->key);
    if (it == first_suspect.end() || it->second > d->t)
      return fail("SB4", fmt::format("node {} delivered nil at {} with no prior suspicion", d->node,
                                     where(d->key, d->sn)));
  }
  return pass("SB4");
}

// ---------------------------------------------------------------------------
// SMR properties

std::set<NodeId> recorded_nodes(const Index& ix) {
  std::set<NodeId> out;
  if (ix.info->compact) {
    for (NodeId i = 0; i < ix.info->n; ++i) {
      if (ix.correct(i)) {
        out.insert(i);
        break;
      }
    }
  } else {
    for (NodeId i = 0; i < ix.info->n; ++i) {
      if (ix.correct(i)) out.insert(i);
    }
  }
  return out;
}

PropertyResult smr1(const Index& ix) {
  for (const auto* d : ix.smr) {
    if (!ix.correct(d->node)) continue;
    auto it = ix.cast_by_id.find(d->id);
    if (it == ix.cast_by_id.end())
      return fail("SMR1", fmt::format("node {} delivered request (c {}, t {}) that no client sent",
                                      d->node, d->id.c, d->id.t));
    if (it->second->digest != d->digest)
      return fail("SMR1", fmt::format("node {} delivered a forged request (c {}, t {})", d->node,
                                      d->id.c, d->id.t));
  }
  return pass("SMR1");
}

PropertyResult smr2(const Index& ix) {
  if (ix.info->compact) return not_evaluable("SMR2", "compact trace records one node's deliveries");
  std::map<std::uint64_t, const SmrDeliver*> at;
  for (const auto* d : ix.smr) {
    if (!ix.correct(d->node)) continue;
    auto [it, fresh] = at.emplace(d->snr, d);
    if (!fresh && (it->second->id != d->id || it->second->digest != d->digest))
      return fail("SMR2", fmt::format("nodes {} and {} disagree at request number {}",
                                      it->second->node, d->node, d->snr));
  }
  return pass("SMR2");
}

PropertyResult smr3(const Index& ix) {
  if (ix.info->compact) return not_evaluable("SMR3", "compact trace records one node's deliveries");
  if (!ix.liveness()) return not_evaluable("SMR3", "run ended before stabilization plus margin");
  const auto cutoff = ix.workload_cutoff();
  std::map<RequestId, std::set<NodeId>> by;
  std::set<RequestId> owed;
  for (const auto* d : ix.smr) {
    if (!ix.correct(d->node)) continue;
    by[d->id].insert(d->node);
    if (d->t <= cutoff) owed.insert(d->id);
  }
  const auto nodes = recorded_nodes(ix);
  for (const auto& id : owed) {
    for (NodeId n : nodes) {
      if (!by[id].count(n))
        return fail("SMR3", fmt::format("node {} never delivered (c {}, t {})", n, id.c, id.t));
    }
  }
  return pass("SMR3");
}

PropertyResult smr4(const Index& ix) {
  if (!ix.liveness()) return not_evaluable("SMR4", "run ended before stabilization plus margin");
  if (ix.info->max_epochs) return not_evaluable("SMR4", "run bounded by an epoch count");
  const auto cutoff = ix.workload_cutoff();
  std::set<std::pair<NodeId, RequestId>> delivered;
  for (const auto* d : ix.smr) delivered.emplace(d->node, d->id);
  const auto nodes = recorded_nodes(ix);
  for (const auto* c : ix.casts) {
    if (c->t > cutoff) continue;
    for (NodeId n : nodes) {
      if (!delivered.count({n, c->id}))
        return fail("SMR4", fmt::format("node {} never delivered (c {}, t {}) sent at {:.3f}s", n,
                                        c->id.c, c->id.t, to_seconds(c->t)));
    }
  }
  return pass("SMR4");
}

PropertyResult no_duplication(const Index& ix) {
  std::set<std::pair<NodeId, RequestId>> ids;
  std::set<std::pair<NodeId, std::uint64_t>> numbers;
  for (const auto* d : ix.smr) {
    if (!ix.correct(d->node)) continue;
    if (!ids.emplace(d->node, d->id).second)
      return fail("no-duplication", fmt::format("node {} delivered (c {}, t {}) twice", d->node,
                                                d->id.c, d->id.t));
    if (!numbers.emplace(d->node, d->snr).second)
      return fail("no-duplication",
                  fmt::format("node {} delivered request number {} twice", d->node, d->snr));
  }
  return pass("no-duplication");
}

// ---------------------------------------------------------------------------
// Structure

PropertyResult bucket_partition(const Index& ix) {
  const auto nb = ix.info->num_buckets;
  std::map<EpochNr, const EpochStart*> reference;
  for (const auto* s : ix.epoch_starts) {
    if (!ix.correct(s->node)) continue;
    reference.emplace(s->epoch, s);
    if (s->segments.empty()) continue;
    std::vector<int> owner(nb, -1);
    for (const auto& seg : s->segments) {
      for (BucketId b : seg.buckets) {
        if (b >= nb) return fail("bucket-partition", fmt::format("bucket {} out of range", b));
        if (owner[b] >= 0)
          return fail("bucket-partition",
                      fmt::format("epoch {}: bucket {} assigned to leaders {} and {}", s->epoch, b,
                                  owner[b], seg.leader));
        owner[b] = static_cast<int>(seg.leader);
      }
    }
    for (BucketId b = 0; b < nb; ++b) {
      if (owner[b] < 0)
        return fail("bucket-partition", fmt::format("epoch {}: bucket {} unassigned", s->epoch, b));
    }
  }
  // Every delivered request belongs to a bucket of the segment it was ordered in.
  std::map<SeqNr, std::pair<EpochNr, const SegmentInfo*>> seg_of_sn;
  for (const auto& [e, s] : reference) {
    for (const auto& seg : s->segments) {
      for (SeqNr sn : seg.seq_nrs) seg_of_sn[sn] = {e, &seg};
    }
  }
  std::set<std::pair<SeqNr, RequestId>> checked;
  for (const auto* d : ix.smr) {
    if (!ix.correct(d->node) || !checked.emplace(d->sn, d->id).second) continue;
    auto it = seg_of_sn.find(d->sn);
    if (it == seg_of_sn.end()) continue;
    const auto& buckets = it->second.second->buckets;
    const auto b = bucket_of(d->id, nb);
    if (!std::binary_search(buckets.begin(), buckets.end(), b))
      return fail("bucket-partition",
                  fmt::format("request (c {}, t {}) of bucket {} ordered at {} outside its buckets",
                              d->id.c, d->id.t, b,
                              where({it->second.first, it->second.second->leader}, d->sn)));
  }
  return pass("bucket-partition");
}

PropertyResult epoch_barrier(const Index& ix) {
  std::map<std::pair<NodeId, EpochNr>, SimTime> completed;
  for (const auto* c : ix.epoch_completes) completed.emplace(std::make_pair(c->node, c->epoch), c->t);
  std::map<EpochNr, std::vector<NodeId>> leaders;
  std::map<NodeId, EpochNr> next_start;
  for (const auto* s : ix.epoch_starts) {
    if (!ix.correct(s->node)) continue;
    auto [it, fresh] = leaders.emplace(s->epoch, s->leaders);
    if (!fresh && it->second != s->leaders)
      return fail("epoch-barrier", fmt::format("nodes disagree on the leaders of epoch {}", s->epoch));
    auto& expected = next_start[s->node];
    if (s->epoch != expected)
      return fail("epoch-barrier", fmt::format("node {} started epoch {} after epoch {}", s->node,
                                               s->epoch, expected ? expected - 1 : 0));
    ++expected;
    if (s->epoch > 0) {
      auto c = completed.find({s->node, s->epoch - 1});
      if (c == completed.end() || c->second > s->t)
        return fail("epoch-barrier", fmt::format("node {} started epoch {} before completing epoch {}",
                                                 s->node, s->epoch, s->epoch - 1));
    }
  }
  for (const auto* c : ix.sb_casts) {
    if (!ix.correct(c->node) || c->key.epoch == 0) continue;
    auto it = completed.find({c->node, c->key.epoch - 1});
    if (it == completed.end() || it->second > c->t)
      return fail("epoch-barrier", fmt::format("node {} proposed {} before completing epoch {}",
                                               c->node, where(c->key, c->sn), c->key.epoch - 1));
  }
  return pass("epoch-barrier");
}

PropertyResult blacklist_bound(const Index& ix) {
  if (ix.info->policy != "blacklist") return not_evaluable("blacklist-bound", "policy is not blacklist");
  const std::size_t n = ix.info->n;
  const std::size_t bound = std::min<std::size_t>(ix.info->leader_set_size, n - ix.info->f);
  for (const auto* s : ix.epoch_starts) {
    if (!ix.correct(s->node)) continue;
    if (s->leaders.size() < bound)
      return fail("blacklist-bound", fmt::format("epoch {} has {} leaders, fewer than {}", s->epoch,
                                                 s->leaders.size(), bound));
  }
  return pass("blacklist-bound");
}

PropertyResult log_equality(const Index& ix) {
  std::vector<const FinalLog*> logs;
  for (const auto* l : ix.final_logs) {
    if (ix.correct(l->node)) logs.push_back(l);
  }
  if (logs.empty()) return not_evaluable("log-equality", "no final log records");
  std::map<SeqNr, const FinalLog*> by_extent;
  for (const auto* l : logs) {
    auto [it, fresh] = by_extent.emplace(l->extent, l);
    if (!fresh && it->second->log_digest != l->log_digest)
      return fail("log-equality", fmt::format("nodes {} and {} hold different logs up to sn {}",
                                              it->second->node, l->node, l->extent));
  }
  for (std::size_t i = 1; i < logs.size(); ++i) {
    const auto& a = logs[0]->epoch_roots;
    const auto& b = logs[i]->epoch_roots;
    const auto common = std::min(a.size(), b.size());
    for (std::size_t e = 0; e < common; ++e) {
      if (a[e] != b[e])
        return fail("log-equality", fmt::format("nodes {} and {} differ at epoch {}", logs[0]->node,
                                                logs[i]->node, e));
    }
  }
  return pass("log-equality");
}

}  // namespace

Report verify(const trace::Trace& trace) {
  Report report;
  const Index ix = build_index(trace);
  static const char* const kAll[] = {"SB1",  "SB2",  "SB3",  "SB4",  "SMR1", "SMR2",
                                     "SMR3", "SMR4", "no-duplication", "bucket-partition",
                                     "epoch-barrier", "blacklist-bound", "log-equality"};
  if (!ix.info) {
    for (const char* name : kAll) report.results.push_back(not_evaluable(name, "trace has no run header"));
    return report;
  }
  report.results.push_back(sb1(ix));
  report.results.push_back(sb2(ix));
  report.results.push_back(sb3(ix));
  report.results.push_back(sb4(ix));
  if (ix.info->sb_only) {
    for (std::size_t i = 4; i < std::size(kAll); ++i)
      report.results.push_back(not_evaluable(kAll[i], "single-instance run"));
    return report;
  }
  report.results.push_back(smr1(ix));
  report.results.push_back(smr2(ix));
  report.results.push_back(smr3(ix));
  report.results.push_back(smr4(ix));
  report.results.push_back(no_duplication(ix));
  report.results.push_back(bucket_partition(ix));
  report.results.push_back(epoch_barrier(ix));
  report.results.push_back(blacklist_bound(ix));
  report.results.push_back(log_equality(ix));
  return report;
}

std::string format(const Report& report) {
  std::string out;
  for (const auto& r : report.results) {
    out += fmt::format("{:<17} {}", r.name, to_string(r.verdict));
    if (!r.detail.empty()) out += "  " + r.detail;
    out += '\n';
  }
  return out;
}

}  // namespace iss::check
