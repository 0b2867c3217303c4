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
#include <vector>

#include "iss/types.hpp"

namespace iss {

/// Contiguous range of sequence numbers [first, first + count).
struct SnRange {
  SeqNr first = 0;
  SeqNr count = 0;

  bool empty() const { return count == 0; }
  bool contains(SeqNr sn) const { return sn >= first && sn < first + count; }
  SeqNr min() const { return first; }
  SeqNr max() const { return first + count - 1; }
  SeqNr end() const { return first + count; }
  std::vector<SeqNr> to_vector() const;

  friend bool operator==(const SnRange&, const SnRange&) = default;
};

struct Segment {
  EpochNr epoch = 0;
  NodeId leader = 0;
  std::size_t index = 0;  // position of the leader in the epoch's leader list
  std::vector<SeqNr> seq_nrs;
  std::vector<BucketId> buckets;

  bool owns(SeqNr sn) const;
  bool owns_bucket(BucketId b) const;
};

/// Per-epoch leader history and the resulting sequence-number layout.
/// Epochs with an empty leaderset consume no sequence numbers.
class EpochLayout {
 public:
  explicit EpochLayout(std::uint64_t epoch_length);

  /// Appends the leaderset of the next epoch (epochs are added in order).
  void add_epoch(std::vector<NodeId> leaders);

  std::size_t known_epochs() const { return leaders_.size(); }
  std::uint64_t epoch_length() const { return epoch_length_; }
  const std::vector<NodeId>& leaders(EpochNr e) const { return leaders_.at(e); }
  SnRange seq_nrs(EpochNr e) const { return ranges_.at(e); }

  /// Epoch whose range contains sn, among known epochs.
  std::optional<EpochNr> epoch_of(SeqNr sn) const;
  /// First sequence number of the next epoch to be added.
  SeqNr next_first() const { return next_first_; }

 private:
  std::uint64_t epoch_length_;
  SeqNr next_first_ = 0;
  std::vector<std::vector<NodeId>> leaders_;
  std::vector<SnRange> ranges_;
};

/// Round-robin split of an epoch's range: leader index i gets every sn with
/// sn mod |leaders| == i.
std::vector<SeqNr> segment_seq_nrs(SnRange range, std::size_t leader_index, std::size_t leader_count);

/// The unique segment containing sn. Throws InvariantViolation otherwise.
const Segment& seg_of(SeqNr sn, const std::vector<Segment>& segments);

struct Delivery {
  RequestPtr request;
  std::uint64_t snr = 0;  // request sequence number, zero-based
  SeqNr sn = 0;           // batch sequence number
};

/// The replicated log. Entries are final once set; delivery proceeds in
/// sequence-number order.
class Log {
 public:
  bool has(SeqNr sn) const { return sn < entries_.size() && entries_[sn].has_value(); }
  const Batch* at(SeqNr sn) const { return has(sn) ? &*entries_[sn] : nullptr; }

  /// Sets log[sn]. Setting an equal value again is a no-op; a different
  /// value raises InvariantViolation.
  void commit(SeqNr sn, Batch batch);

  /// Delivers every request of every batch at firstUndelivered onward
  /// until the first gap.
  std::vector<Delivery> deliver_ready();

  SeqNr first_undelivered() const { return first_undelivered_; }
  std::uint64_t total_delivered() const { return total_delivered_; }
  /// One past the highest committed sn.
  SeqNr extent() const { return entries_.size(); }
  bool covers(SnRange range) const;

  /// Canonical bytes of entries in [first, end): used for log equality.
  Bytes encode(SeqNr first, SeqNr end) const;

 private:
  std::vector<std::optional<Batch>> entries_;
  SeqNr first_undelivered_ = 0;
  std::uint64_t total_delivered_ = 0;
};

}  // namespace iss
