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

#include "iss/policies.hpp"

#include <algorithm>

namespace iss::policy {

NodeId leader_of(SeqNr sn, const EpochLayout& layout) {
  auto e = layout.epoch_of(sn);
  if (!e) throw InvariantViolation("sequence number outside every known epoch");
  const auto& leaders = layout.leaders(*e);
  return leaders[sn % leaders.size()];
}

std::int64_t last_failure(NodeId node, EpochNr e, const EpochLayout& layout, const Log& log) {
  std::int64_t result = -1;
  for (EpochNr past = 0; past < e && past < layout.known_epochs(); ++past) {
    const auto range = layout.seq_nrs(past);
    for (SeqNr sn = range.first; sn < range.end(); ++sn) {
      const Batch* b = log.at(sn);
      if (b && b->is_nil() && leader_of(sn, layout) == node) result = static_cast<std::int64_t>(sn);
    }
  }
  return result;
}

std::vector<NodeId> blacklist(const std::vector<std::int64_t>& last_failures,
                              std::size_t max_excluded) {
  std::vector<NodeId> failed;
  for (NodeId n = 0; n < last_failures.size(); ++n) {
    if (last_failures[n] >= 0) failed.push_back(n);
  }
  std::sort(failed.begin(), failed.end(), [&](NodeId a, NodeId b) {
    if (last_failures[a] != last_failures[b]) return last_failures[a] > last_failures[b];
    return a > b;
  });
  if (failed.size() > max_excluded) failed.resize(max_excluded);
  std::sort(failed.begin(), failed.end());
  return failed;
}

LeaderPolicy::LeaderPolicy(const NodeConfig& config)
    : kind_(config.policy),
      n_(config.n),
      f_(config.f),
      leader_set_size_(config.effective_leader_set_size()),
      ban_period_(static_cast<std::int64_t>(config.ban_period)),
      decrease_(static_cast<std::int64_t>(config.backoff_decrease)),
      last_failure_(config.n, -1),
      penalty_(config.n, 0) {}

std::vector<NodeId> LeaderPolicy::leaders() const {
  std::vector<NodeId> out;
  switch (kind_) {
    case PolicyKind::Simple:
      for (NodeId i = 0; i < n_; ++i) out.push_back(i);
      break;
    case PolicyKind::Blacklist: {
      const auto excluded = blacklist(last_failure_, f_);
      for (NodeId i = 0; i < n_; ++i) {
        if (!std::binary_search(excluded.begin(), excluded.end(), i)) out.push_back(i);
      }
      break;
    }
    case PolicyKind::Backoff:
      for (NodeId i = 0; i < n_; ++i) {
        if (penalty_[i] <= 0) out.push_back(i);
      }
      break;
  }
  if (out.size() > leader_set_size_) out.resize(leader_set_size_);
  return out;
}

void LeaderPolicy::epoch_committed(EpochNr e, const EpochLayout& layout, const Log& log) {
  if (e != next_epoch_) throw InvariantViolation("leader policy fed out of order");
  std::vector<bool> failed(n_, false);
  const auto range = layout.seq_nrs(e);
  for (SeqNr sn = range.first; sn < range.end(); ++sn) {
    const Batch* b = log.at(sn);
    if (!b) throw InvariantViolation("leader policy fed an uncommitted epoch");
    if (!b->is_nil()) continue;
    const NodeId leader = leader_of(sn, layout);
    failed[leader] = true;
    last_failure_[leader] = std::max(last_failure_[leader], static_cast<std::int64_t>(sn));
  }
  for (NodeId i = 0; i < n_; ++i) {
    if (failed[i]) {
      penalty_[i] = penalty_[i] > 0 ? penalty_[i] * 2 - 1 : ban_period_;
    } else if (penalty_[i] > 0) {
      penalty_[i] = std::max<std::int64_t>(0, penalty_[i] - decrease_);
    }
  }
  ++next_epoch_;
}

}  // namespace iss::policy
