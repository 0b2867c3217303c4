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

#include "iss/messages.hpp"

#include "iss/crypto.hpp"

namespace iss {

namespace {

constexpr std::size_t kHeader = 48;
constexpr std::size_t kSig = 64;

struct SbSize {
  std::size_t operator()(const PbftPrePrepare& m) const { return 48 + m.batch.wire_size(); }
  std::size_t operator()(const PbftPrepare&) const { return 56 + kSig; }
  std::size_t operator()(const PbftCommit&) const { return 56; }
  std::size_t operator()(const PbftViewChange& m) const {
    std::size_t s = 24 + kSig;
    for (const auto& c : m.prepared) s += 48 + c.batch.wire_size() + c.prepares.size() * (8 + kSig);
    return s;
  }
  std::size_t operator()(const PbftNewView& m) const {
    std::size_t s = 16;
    for (const auto& vc : m.view_changes) s += (*this)(vc);
    for (const auto& pp : m.pre_prepares) s += (*this)(pp);
    return s;
  }
  std::size_t operator()(const RaftAppend& m) const {
    std::size_t s = 40;
    for (const auto& e : m.entries) s += 16 + e.batch.wire_size();
    return s;
  }
  std::size_t operator()(const RaftAppendResp&) const { return 24; }
  std::size_t operator()(const RaftVote&) const { return 24; }
  std::size_t operator()(const RaftVoteResp&) const { return 16; }
  std::size_t operator()(const BrbSend& m) const { return 16 + m.value.wire_size(); }
  std::size_t operator()(const BrbEcho& m) const { return 16 + m.value.wire_size(); }
  std::size_t operator()(const BrbReady&) const { return 48; }
};

struct Size {
  std::size_t operator()(const SbMessage& m) const { return 16 + std::visit(SbSize{}, m.body); }
  std::size_t operator()(const CheckpointMsg&) const { return 48 + kSig; }
  std::size_t operator()(const StateRequestMsg&) const { return 8; }
  std::size_t operator()(const StateResponseMsg& m) const {
    std::size_t s = 8;
    for (const auto& e : m.epochs) {
      s += 48 + e.checkpoint.signatures.size() * (8 + kSig);
      for (const auto& b : e.entries) s += b.wire_size();
    }
    return s;
  }
  std::size_t operator()(const HeartbeatMsg&) const { return 8; }
  std::size_t operator()(const BrbHeartbeatMsg&) const { return 16; }
  std::size_t operator()(const RequestMsg& m) const {
    return 24 + m.request->payload.size() + m.request->sig.size();
  }
  std::size_t operator()(const ResponseMsg& m) const { return 8 + kSig + 24 * m.entries.size(); }
  std::size_t operator()(const AssignmentMsg& m) const { return 8 + 4 * m.leaders.size(); }
};

void add_key(crypto::Hasher& h, const InstanceKey& key) { h.add_u64(key.epoch).add_u64(key.leader); }

}  // namespace

std::size_t wire_size(const Payload& p) { return kHeader + std::visit(Size{}, p); }

Digest prepare_digest(const InstanceKey& key, std::uint64_t view, SeqNr sn, const Digest& value) {
  crypto::Hasher h;
  h.add_u64(0x5052455041524531ULL);  // domain tag
  add_key(h, key);
  h.add_u64(view).add_u64(sn).add(value);
  return h.finish();
}

Digest view_change_digest(const InstanceKey& key, const PbftViewChange& vc) {
  crypto::Hasher h;
  h.add_u64(0x5649455743484731ULL);
  add_key(h, key);
  h.add_u64(vc.new_view).add_u64(vc.sender).add_u64(vc.prepared.size());
  for (const auto& c : vc.prepared) {
    h.add_u64(c.sn).add_u64(c.view).add(c.digest).add_u64(c.prepares.size());
    for (const auto& p : c.prepares) h.add_u64(p.sender).add(p.sig);
  }
  return h.finish();
}

Digest checkpoint_digest(EpochNr epoch, SeqNr max_sn, const Digest& root) {
  crypto::Hasher h;
  h.add_u64(0x434b505431ULL).add_u64(epoch).add_u64(max_sn).add(root);
  return h.finish();
}

Digest response_digest(NodeId node, const std::vector<ResponseEntry>& entries) {
  crypto::Hasher h;
  h.add_u64(0x52455350ULL).add_u64(node).add_u64(entries.size());
  for (const auto& e : entries) h.add_u64(e.id.c).add_u64(e.id.t).add_u64(e.snr);
  return h.finish();
}

}  // namespace iss
