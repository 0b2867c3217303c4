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

#pragma once

#include <vector>

#include "iss/types.hpp"

namespace iss::merkle {

/// Root of a binary SHA-256 tree over `leaves`; an odd node at any level is
/// paired with itself. The empty tree has the all-zero root.
Digest root(const std::vector<Digest>& leaves);

/// Root over the digests of `batches`, in order.
Digest root_of(const std::vector<Batch>& batches);

struct ProofStep {
  Digest sibling{};
  bool sibling_on_left = false;
};

/// Inclusion proof for leaf `index`.
std::vector<ProofStep> prove(const std::vector<Digest>& leaves, std::size_t index);
bool verify(const Digest& leaf, const std::vector<ProofStep>& proof, const Digest& root);

}  // namespace iss::merkle
