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

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace iss {

using NodeId = std::uint32_t;
using ProcessId = std::uint32_t;  // nodes are 0..n-1, clients follow
using ClientId = std::uint64_t;
using SeqNr = std::uint64_t;
using EpochNr = std::uint64_t;
using BucketId = std::uint32_t;
using SimTime = std::int64_t;  // simulated nanoseconds
using Bytes = std::vector<std::uint8_t>;

constexpr SimTime kNanosecond = 1;
constexpr SimTime kMicrosecond = 1000;
constexpr SimTime kMillisecond = 1000 * kMicrosecond;
constexpr SimTime kSecond = 1000 * kMillisecond;

inline double to_seconds(SimTime t) { return static_cast<double>(t) / kSecond; }
inline SimTime from_seconds(double s) { return static_cast<SimTime>(s * kSecond); }

using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(std::span<const std::uint8_t> bytes);

/// Raised when a protocol invariant is broken at runtime. The simulator
/// stops the run and keeps the trace prefix for diagnosis.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RequestId {
  std::uint64_t t = 0;  // per-client logical timestamp
  ClientId c = 0;

  friend bool operator==(const RequestId&, const RequestId&) = default;
  friend auto operator<=>(const RequestId& a, const RequestId& b) {
    if (auto cmp = a.c <=> b.c; cmp != 0) return cmp;
    return a.t <=> b.t;
  }
};

struct RequestIdHash {
  std::size_t operator()(const RequestId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.c * 0x9E3779B97F4A7C15ULL ^ id.t);
  }
};

/// A client operation. Immutable once built; batches share requests by
/// pointer.
struct Request {
  Bytes payload;
  RequestId id;
  Bytes sig;
  Digest digest{};  // SHA-256 over (c, t, payload); what the client signs

  static Request make(RequestId id, Bytes payload);
};

/// Duplicates are requests with equal identity and equal payload.
inline bool is_duplicate(const Request& a, const Request& b) {
  return a.id == b.id && a.payload == b.payload;
}

using RequestPtr = std::shared_ptr<const Request>;

/// Either the nil value or an ordered list of requests (possibly empty).
class Batch {
 public:
  Batch() : nil_(true) {}
  static Batch nil() { return Batch{}; }
  static Batch of(std::vector<RequestPtr> requests) {
    Batch b;
    b.nil_ = false;
    b.requests_ = std::move(requests);
    return b;
  }

  bool is_nil() const { return nil_; }
  const std::vector<RequestPtr>& requests() const { return requests_; }
  std::size_t size() const { return requests_.size(); }
  bool empty() const { return !nil_ && requests_.empty(); }

  Digest digest() const;
  std::size_t wire_size() const;

  friend bool operator==(const Batch& a, const Batch& b);

 private:
  bool nil_;
  std::vector<RequestPtr> requests_;
};

/// Digest value recorded in traces for nil.
Digest nil_digest();

}  // namespace iss
