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

#include "iss/domain.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace iss {

std::vector<SeqNr> SnRange::to_vector() const {
  std::vector<SeqNr> out(count);
  for (SeqNr i = 0; i < count; ++i) out[i] = first + i;
  return out;
}

bool Segment::owns(SeqNr sn) const {
  return std::binary_search(seq_nrs.begin(), seq_nrs.end(), sn);
}

bool Segment::owns_bucket(BucketId b) const {
  return std::binary_search(buckets.begin(), buckets.end(), b);
}

EpochLayout::EpochLayout(std::uint64_t epoch_length) : epoch_length_(epoch_length) {
  if (epoch_length == 0) throw ConfigError("epochLength must be positive");
}

void EpochLayout::add_epoch(std::vector<NodeId> leaders) {
  std::sort(leaders.begin(), leaders.end());
  SnRange range{next_first_, leaders.empty() ? 0 : epoch_length_};
  next_first_ = range.end();
  leaders_.push_back(std::move(leaders));
  ranges_.push_back(range);
}

std::optional<EpochNr> EpochLayout::epoch_of(SeqNr sn) const {
  // Ranges are sorted and contiguous; skipped epochs are empty.
  auto it = std::upper_bound(ranges_.begin(), ranges_.end(), sn,
                             [](SeqNr v, const SnRange& r) { return v < r.first; });
  while (it != ranges_.begin()) {
    --it;
    if (it->contains(sn)) return static_cast<EpochNr>(it - ranges_.begin());
    if (!it->empty()) break;
  }
  return std::nullopt;
}

std::vector<SeqNr> segment_seq_nrs(SnRange range, std::size_t leader_index,
                                   std::size_t leader_count) {
  std::vector<SeqNr> out;
  if (leader_count == 0) return out;
  for (SeqNr sn = range.first; sn < range.end(); ++sn) {
    if (sn % leader_count == leader_index) out.push_back(sn);
  }
  return out;
}

const Segment& seg_of(SeqNr sn, const std::vector<Segment>& segments) {
  for (const auto& seg : segments) {
    if (seg.owns(sn)) return seg;
  }
  throw InvariantViolation(fmt::format("no segment contains sequence number {}", sn));
}

void Log::commit(SeqNr sn, Batch batch) {
  if (sn >= entries_.size()) entries_.resize(sn + 1);
  auto& slot = entries_[sn];
  if (slot.has_value()) {
    if (*slot == batch) return;
    throw InvariantViolation(fmt::format("log[{}] already holds a different batch", sn));
  }
  slot = std::move(batch);
}

std::vector<Delivery> Log::deliver_ready() {
  std::vector<Delivery> out;
  while (has(first_undelivered_)) {
    const auto& batch = *entries_[first_undelivered_];
    for (const auto& req : batch.requests()) {
      out.push_back({req, total_delivered_, first_undelivered_});
      ++total_delivered_;
    }
    ++first_undelivered_;
  }
  return out;
}

bool Log::covers(SnRange range) const {
  for (SeqNr sn = range.first; sn < range.end(); ++sn) {
    if (!has(sn)) return false;
  }
  return true;
}

Bytes Log::encode(SeqNr first, SeqNr end) const {
  Bytes out;
  auto put = [&out](std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  for (SeqNr sn = first; sn < end; ++sn) {
    put(sn);
    if (!has(sn)) {
      out.push_back(0xff);
      continue;
    }
    const auto& batch = *entries_[sn];
    if (batch.is_nil()) {
      out.push_back(0);
      continue;
    }
    out.push_back(1);
    put(batch.size());
    for (const auto& r : batch.requests()) {
      put(r->id.c);
      put(r->id.t);
      put(r->payload.size());
      out.insert(out.end(), r->payload.begin(), r->payload.end());
    }
  }
  return out;
}

}  // namespace iss
