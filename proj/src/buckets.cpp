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

#include "iss/buckets.hpp"

#include <algorithm>
#include <queue>

namespace iss {

BucketId bucket_of(RequestId id, std::uint32_t num_buckets) {
  unsigned __int128 key = (static_cast<unsigned __int128>(id.c) << 64) | id.t;
  return static_cast<BucketId>(key % num_buckets);
}

std::vector<BucketId> init_buckets(EpochNr e, NodeId i, std::size_t n, std::uint32_t num_buckets) {
  std::vector<BucketId> out;
  for (BucketId b = 0; b < num_buckets; ++b) {
    if ((b + e) % n == i) out.push_back(b);
  }
  return out;
}

std::vector<BucketId> active_buckets(EpochNr e, const std::vector<NodeId>& leaders, NodeId i,
                                     std::size_t n, std::uint32_t num_buckets) {
  auto it = std::find(leaders.begin(), leaders.end(), i);
  if (it == leaders.end()) return {};
  const auto index = static_cast<std::size_t>(it - leaders.begin());
  std::vector<BucketId> out;
  for (BucketId b = 0; b < num_buckets; ++b) {
    const auto owner = static_cast<NodeId>((b + e) % n);
    if (owner == i) {
      out.push_back(b);
    } else if (!std::binary_search(leaders.begin(), leaders.end(), owner) &&
               (b + e) % leaders.size() == index) {
      out.push_back(b);
    }
  }
  return out;
}

bool BucketQueue::add(RequestPtr request, std::uint64_t stamp) {
  auto [it, inserted] = index_.emplace(request->id, stamp);
  if (!inserted) return false;
  queue_.emplace(stamp, std::move(request));
  return true;
}

bool BucketQueue::remove(const RequestId& id) {
  auto it = index_.find(id);
  if (it == index_.end()) return false;
  queue_.erase(it->second);
  index_.erase(it);
  return true;
}

BucketQueues::BucketQueues(std::uint32_t num_buckets) : queues_(num_buckets) {
  if (num_buckets == 0) throw ConfigError("numBuckets must be positive");
}

bool BucketQueues::add(RequestPtr request) {
  auto [it, fresh] = stamps_.emplace(request->id, next_stamp_);
  if (fresh) ++next_stamp_;
  auto b = bucket_of(request->id, num_buckets());
  return queues_[b].add(std::move(request), it->second);
}

bool BucketQueues::remove(const RequestId& id) {
  return queues_[bucket_of(id, num_buckets())].remove(id);
}

bool BucketQueues::contains(const RequestId& id) const {
  return queues_[bucket_of(id, num_buckets())].contains(id);
}

Batch BucketQueues::cut_batch(const std::vector<BucketId>& buckets, std::size_t max_size) {
  using Cursor = std::pair<BucketQueue::Entries::const_iterator, BucketId>;
  auto later = [](const Cursor& a, const Cursor& b) { return a.first->first > b.first->first; };
  std::priority_queue<Cursor, std::vector<Cursor>, decltype(later)> heads(later);
  for (auto b : buckets) {
    const auto& q = queues_.at(b).entries();
    if (!q.empty()) heads.emplace(q.begin(), b);
  }
  std::vector<RequestPtr> picked;
  while (picked.size() < max_size && !heads.empty()) {
    auto [it, b] = heads.top();
    heads.pop();
    picked.push_back(it->second);
    if (++it != queues_[b].entries().end()) heads.emplace(it, b);
  }
  for (const auto& r : picked) remove(r->id);
  return Batch::of(std::move(picked));
}

std::size_t BucketQueues::pending(const std::vector<BucketId>& buckets) const {
  std::size_t total = 0;
  for (auto b : buckets) total += queues_.at(b).size();
  return total;
}

std::size_t BucketQueues::total_pending() const {
  std::size_t total = 0;
  for (const auto& q : queues_) total += q.size();
  return total;
}

std::vector<Segment> epoch_segments(EpochNr e, const EpochLayout& layout, std::size_t n,
                                    std::uint32_t num_buckets) {
  const auto range = layout.seq_nrs(e);
  const auto& leaders = layout.leaders(e);
  std::vector<Segment> out;
  for (std::size_t i = 0; i < leaders.size(); ++i) {
    Segment s;
    s.epoch = e;
    s.leader = leaders[i];
    s.index = i;
    s.seq_nrs = segment_seq_nrs(range, i, leaders.size());
    s.buckets = active_buckets(e, leaders, leaders[i], n, num_buckets);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace iss
