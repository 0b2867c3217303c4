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

#include "iss/merkle.hpp"

#include "iss/crypto.hpp"

namespace iss::merkle {

namespace {

Digest combine(const Digest& left, const Digest& right) {
  crypto::Hasher h;
  h.add(left).add(right);
  return h.finish();
}

std::vector<Digest> next_level(const std::vector<Digest>& level) {
  std::vector<Digest> up;
  up.reserve((level.size() + 1) / 2);
  for (std::size_t i = 0; i < level.size(); i += 2) {
    const Digest& right = i + 1 < level.size() ? level[i + 1] : level[i];
    up.push_back(combine(level[i], right));
  }
  return up;
}

}  // namespace

Digest root(const std::vector<Digest>& leaves) {
  if (leaves.empty()) return Digest{};
  std::vector<Digest> level = leaves;
  while (level.size() > 1) level = next_level(level);
  return level.front();
}

Digest root_of(const std::vector<Batch>& batches) {
  std::vector<Digest> leaves;
  leaves.reserve(batches.size());
  for (const auto& b : batches) leaves.push_back(b.digest());
  return root(leaves);
}

std::vector<ProofStep> prove(const std::vector<Digest>& leaves, std::size_t index) {
  if (index >= leaves.size()) throw std::out_of_range("merkle leaf index");
  std::vector<ProofStep> proof;
  std::vector<Digest> level = leaves;
  while (level.size() > 1) {
    const bool is_right = index % 2 == 1;
    const std::size_t sibling = is_right ? index - 1 : std::min(index + 1, level.size() - 1);
    proof.push_back({level[sibling], is_right});
    level = next_level(level);
    index /= 2;
  }
  return proof;
}

bool verify(const Digest& leaf, const std::vector<ProofStep>& proof, const Digest& root) {
  Digest acc = leaf;
  for (const auto& step : proof) {
    acc = step.sibling_on_left ? combine(step.sibling, acc) : combine(acc, step.sibling);
  }
  return acc == root;
}

}  // namespace iss::merkle
