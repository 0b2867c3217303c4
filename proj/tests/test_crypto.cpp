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

#include <doctest.h>

#include "helpers.hpp"
#include "iss/crypto.hpp"
#include "iss/merkle.hpp"

using namespace iss;

namespace {

Digest leaf(std::uint8_t i) { return crypto::sha256(std::span<const std::uint8_t>(&i, 1)); }

}  // namespace

TEST_CASE("sha256 known answers") {
  CHECK(to_hex(crypto::sha256(std::string_view("abc"))) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(to_hex(crypto::sha256(std::string_view(""))) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  crypto::Hasher h;
  h.add(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>("ab"), 2));
  h.add(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>("c"), 1));
  CHECK(h.finish() == crypto::sha256(std::string_view("abc")));
}

TEST_CASE("signature schemes") {
  auto check_scheme = [](const crypto::SignatureScheme& s) {
    const auto d = crypto::sha256(std::string_view("message"));
    const auto sig = s.sign(1, d);
    CHECK(s.verify(1, d, sig));
    CHECK_FALSE(s.verify(2, d, sig));
    auto other = d;
    other[0] ^= 1;
    CHECK_FALSE(s.verify(1, other, sig));
    auto bad = sig;
    bad[0] ^= 1;
    CHECK_FALSE(s.verify(1, d, bad));
    CHECK(s.sign(1, d) == sig);
  };
  check_scheme(*crypto::make_mac_scheme(42, 4));
  check_scheme(*crypto::make_ed25519_scheme(42, 4));
  // Different seeds give different keys.
  const auto d = crypto::sha256(std::string_view("x"));
  CHECK(crypto::make_mac_scheme(1, 2)->sign(0, d) != crypto::make_mac_scheme(2, 2)->sign(0, d));
}

TEST_CASE("merkle roots match an independent implementation") {
  CHECK(merkle::root({}) == Digest{});
  CHECK(merkle::root({leaf(0)}) == leaf(0));
  CHECK(to_hex(merkle::root({leaf(0), leaf(1), leaf(2)})) ==
        "f2dcdd96791b6bac5d554f2d320e594b834f5da1981812c3707e7772234cb0ad");
  CHECK(to_hex(merkle::root({leaf(0), leaf(1), leaf(2), leaf(3), leaf(4)})) ==
        "9674600fd139741c0f7dd7a32d984a0e74401cc90e6e8e5d203ed973d27324fe");
}

TEST_CASE("merkle inclusion proofs") {
  for (std::size_t n = 1; n <= 9; ++n) {
    std::vector<Digest> leaves;
    for (std::size_t i = 0; i < n; ++i) leaves.push_back(leaf(static_cast<std::uint8_t>(i)));
    const auto root = merkle::root(leaves);
    for (std::size_t i = 0; i < n; ++i) {
      const auto proof = merkle::prove(leaves, i);
      CHECK(merkle::verify(leaves[i], proof, root));
      CHECK_FALSE(merkle::verify(leaf(100), proof, root));
    }
  }
  CHECK_THROWS(merkle::prove({leaf(0)}, 1));
}

TEST_CASE("merkle root over batches changes with any entry") {
  std::vector<Batch> entries{Batch::nil(), Batch::of({}), iss::testing::make_batch({{1, 2}})};
  const auto root = merkle::root_of(entries);
  entries[0] = Batch::of({});
  CHECK(merkle::root_of(entries) != root);
}
