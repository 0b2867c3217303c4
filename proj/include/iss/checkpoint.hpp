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

#include "iss/config.hpp"
#include "iss/crypto.hpp"
#include "iss/domain.hpp"
#include "iss/messages.hpp"

namespace iss::checkpoint {

/// Digest of a batch recomputed from request contents; the digests carried
/// by the requests are not trusted.
Digest content_digest(const Batch& batch);

/// At least a strong quorum of distinct nodes signed (epoch, max_sn, root).
bool verify(const StableCheckpoint& cp, const NodeConfig& config,
            const crypto::SignatureScheme& sigs);

/// A transferred epoch is accepted if it fills `range` exactly and its
/// recomputed Merkle root is the one a valid stable checkpoint attests.
bool verify_transfer(const EpochTransfer& t, SnRange range, const NodeConfig& config,
                     const crypto::SignatureScheme& sigs);

}  // namespace iss::checkpoint
