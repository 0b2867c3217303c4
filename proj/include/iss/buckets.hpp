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

#include <map>
#include <unordered_map>
#include <vector>

#include "iss/domain.hpp"
#include "iss/types.hpp"

namespace iss {

/// Maps a request identity to its bucket: the 128-bit big-endian
/// concatenation c||t reduced modulo num_buckets. The payload is excluded.
BucketId bucket_of(RequestId id, std::uint32_t num_buckets);

/// Buckets b with (b + e) mod n == i.
std::vector<BucketId> init_buckets(EpochNr e, NodeId i, std::size_t n, std::uint32_t num_buckets);

/// Buckets of leader i in epoch e: its initial buckets plus its round-robin
/// share of the initial buckets of all non-leaders. `leaders` must be sorted
/// and contain i.
std::vector<BucketId> active_buckets(EpochNr e, const std::vector<NodeId>& leaders, NodeId i,
                                     std::size_t n, std::uint32_t num_buckets);

/// Segments of a known epoch: one per leader, in leader order, with
/// round-robin sequence numbers and the leader's active buckets.
std::vector<Segment> epoch_segments(EpochNr e, const EpochLayout& layout, std::size_t n,
                                    std::uint32_t num_buckets);

/// FIFO of pending requests of one bucket, ordered by reception stamp.
class BucketQueue {
 public:
  /// Returns false if a request with the same id is already queued.
  bool add(RequestPtr request, std::uint64_t stamp);
  bool remove(const RequestId& id);
  bool contains(const RequestId& id) const { return index_.count(id) != 0; }

  std::size_t size() const { return queue_.size(); }
  bool empty() const { return queue_.empty(); }

  using Entries = std::map<std::uint64_t, RequestPtr>;
  const Entries& entries() const { return queue_; }

 private:
  Entries queue_;
  std::unordered_map<RequestId, std::uint64_t, RequestIdHash> index_;
};

/// All bucket queues of a node, plus the reception stamps used to restore
/// FIFO order on resurrection.
class BucketQueues {
 public:
  explicit BucketQueues(std::uint32_t num_buckets);

  std::uint32_t num_buckets() const { return static_cast<std::uint32_t>(queues_.size()); }
  BucketQueue& queue(BucketId b) { return queues_.at(b); }
  const BucketQueue& queue(BucketId b) const { return queues_.at(b); }

  /// Enqueues with a fresh reception stamp on first sight, or the stamp
  /// recorded on first reception otherwise. Returns false if already queued.
  bool add(RequestPtr request);
  bool remove(const RequestId& id);
  bool contains(const RequestId& id) const;

  /// Up to max_size globally-oldest requests across the given buckets,
  /// removed from their queues. Never nil.
  Batch cut_batch(const std::vector<BucketId>& buckets, std::size_t max_size);

  /// Puts the requests of a previously cut batch back at their original
  /// positions, skipping those for which `skip` returns true.
  template <typename Skip>
  void resurrect(const Batch& batch, Skip&& skip) {
    if (batch.is_nil()) return;
    for (const auto& r : batch.requests()) {
      if (skip(r->id)) continue;
      add(r);
    }
  }

  std::size_t pending(const std::vector<BucketId>& buckets) const;
  std::size_t total_pending() const;

  /// Drops the remembered stamp of a request that can no longer be queued.
  void forget(const RequestId& id) { stamps_.erase(id); }

 private:
  std::vector<BucketQueue> queues_;
  std::unordered_map<RequestId, std::uint64_t, RequestIdHash> stamps_;
  std::uint64_t next_stamp_ = 0;
};

}  // namespace iss
