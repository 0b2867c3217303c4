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

#include <memory>
#include <span>
#include <string_view>

#include "iss/types.hpp"

namespace iss::crypto {

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

/// Incremental SHA-256 for canonical encodings built piecewise.
class Hasher {
 public:
  Hasher();
  ~Hasher();
  Hasher(const Hasher&) = delete;
  Hasher& operator=(const Hasher&) = delete;

  Hasher& add(std::span<const std::uint8_t> data);
  Hasher& add_u64(std::uint64_t v);
  Hasher& add(const Digest& d) { return add(std::span<const std::uint8_t>(d)); }
  Digest finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Signature scheme over process identities. Every process in a run
/// shares the same registry; a process only signs under its own id.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;
  virtual Bytes sign(ProcessId signer, std::span<const std::uint8_t> msg) const = 0;
  virtual bool verify(ProcessId signer, std::span<const std::uint8_t> msg,
                      std::span<const std::uint8_t> sig) const = 0;
  virtual std::string_view name() const = 0;

  Bytes sign(ProcessId signer, const Digest& d) const {
    return sign(signer, std::span<const std::uint8_t>(d));
  }
  bool verify(ProcessId signer, const Digest& d, std::span<const std::uint8_t> sig) const {
    return verify(signer, std::span<const std::uint8_t>(d), sig);
  }
};

/// Keyed deterministic MAC (HMAC-SHA256, key derived from seed and id).
/// Fast and reproducible; the default for simulation.
std::unique_ptr<SignatureScheme> make_mac_scheme(std::uint64_t seed, std::size_t processes);

/// Ed25519 with keys derived deterministically from seed and id.
std::unique_ptr<SignatureScheme> make_ed25519_scheme(std::uint64_t seed, std::size_t processes);

}  // namespace iss::crypto
