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

#include "iss/types.hpp"

#include "iss/crypto.hpp"

namespace iss {

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Request Request::make(RequestId id, Bytes payload) {
  Request r;
  r.id = id;
  r.payload = std::move(payload);
  crypto::Hasher h;
  h.add_u64(id.c).add_u64(id.t).add(r.payload);
  r.digest = h.finish();
  return r;
}

Digest nil_digest() {
  Digest d{};
  d.fill(0);
  return d;
}

Digest Batch::digest() const {
  if (nil_) return nil_digest();
  crypto::Hasher h;
  h.add_u64(1).add_u64(requests_.size());
  for (const auto& r : requests_) h.add(r->digest);
  return h.finish();
}

std::size_t Batch::wire_size() const {
  std::size_t size = 16;
  for (const auto& r : requests_) size += 24 + r->payload.size() + r->sig.size();
  return size;
}

bool operator==(const Batch& a, const Batch& b) {
  if (a.nil_ != b.nil_) return false;
  if (a.requests_.size() != b.requests_.size()) return false;
  for (std::size_t i = 0; i < a.requests_.size(); ++i) {
    if (a.requests_[i] == b.requests_[i]) continue;
    if (!is_duplicate(*a.requests_[i], *b.requests_[i])) return false;
  }
  return true;
}

}  // namespace iss
