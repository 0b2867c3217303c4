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

#include "iss/config.hpp"
#include "iss/domain.hpp"

namespace iss::policy {

/// Leader of sn under the round-robin split of its epoch.
NodeId leader_of(SeqNr sn, const EpochLayout& layout);

/// Highest sn below the start of epoch e that `node` led and that was
/// committed as nil, or -1. Scans the whole history; reference version.
std::int64_t last_failure(NodeId node, EpochNr e, const EpochLayout& layout, const Log& log);

/// Nodes to exclude under BLACKLIST given every node's last failure: up to
/// `max_excluded` nodes with a failure, highest failure first, ties toward
/// the higher id.
std::vector<NodeId> blacklist(const std::vector<std::int64_t>& last_failures,
                              std::size_t max_excluded);

/// Leader selection, folded epoch by epoch over the committed log. Every
/// node feeds the same epochs in the same order, so every node computes
/// the same leadersets.
class LeaderPolicy {
 public:
  explicit LeaderPolicy(const NodeConfig& config);

  /// Leaderset of the next epoch to start (epoch 0 before anything was folded).
  std::vector<NodeId> leaders() const;

  /// Folds epoch e, which must be the next unfolded epoch and fully committed.
  void epoch_committed(EpochNr e, const EpochLayout& layout, const Log& log);

  EpochNr next_epoch() const { return next_epoch_; }
  std::int64_t last_failure(NodeId n) const { return last_failure_.at(n); }
  std::int64_t penalty(NodeId n) const { return penalty_.at(n); }

 private:
  PolicyKind kind_;
  std::size_t n_;
  std::size_t f_;
  std::size_t leader_set_size_;
  std::int64_t ban_period_;
  std::int64_t decrease_;
  EpochNr next_epoch_ = 0;
  std::vector<std::int64_t> last_failure_;
  std::vector<std::int64_t> penalty_;
};

}  // namespace iss::policy
