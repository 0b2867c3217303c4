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

#include "iss/checkpoint.hpp"

#include <set>

#include "iss/merkle.hpp"

namespace iss::checkpoint {

Digest content_digest(const Batch& batch) {
  if (batch.is_nil()) return nil_digest();
  std::vector<RequestPtr> rebuilt;
  rebuilt.reserve(batch.size());
  for (const auto& r : batch.requests()) {
    rebuilt.push_back(std::make_shared<const Request>(Request::make(r->id, r->payload)));
  }
  return Batch::of(std::move(rebuilt)).digest();
}

bool verify(const StableCheckpoint& cp, const NodeConfig& config,
            const crypto::SignatureScheme& sigs) {
  std::set<NodeId> signers;
  const auto d = checkpoint_digest(cp.epoch, cp.max_sn, cp.root);
  for (const auto& s : cp.signatures) {
    if (s.sender >= config.n || !signers.insert(s.sender).second) return false;
    if (!sigs.verify(s.sender, d, s.sig)) return false;
  }
  return signers.size() >= config.strong_quorum();
}

bool verify_transfer(const EpochTransfer& t, SnRange range, const NodeConfig& config,
                     const crypto::SignatureScheme& sigs) {
  if (t.entries.size() != range.count) return false;
  if (range.empty()) return true;
  const auto& cp = t.checkpoint;
  if (cp.epoch != t.epoch || cp.max_sn != range.max()) return false;
  std::vector<Digest> leaves;
  leaves.reserve(t.entries.size());
  for (const auto& b : t.entries) leaves.push_back(content_digest(b));
  return merkle::root(leaves) == cp.root && verify(cp, config, sigs);
}

}  // namespace iss::checkpoint
