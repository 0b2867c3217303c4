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

#include "iss/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <vector>

namespace iss::crypto {

Digest sha256(std::span<const std::uint8_t> data) {
  Digest out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest sha256(std::string_view data) {
  return sha256(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

struct Hasher::Impl {
  SHA256_CTX ctx;
};

#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wdeprecated-declarations"
Hasher::Hasher() : impl_(std::make_unique<Impl>()) { SHA256_Init(&impl_->ctx); }
Hasher::~Hasher() = default;

Hasher& Hasher::add(std::span<const std::uint8_t> data) {
  SHA256_Update(&impl_->ctx, data.data(), data.size());
  return *this;
}

Hasher& Hasher::add_u64(std::uint64_t v) {
  std::uint8_t buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
  return add(std::span<const std::uint8_t>(buf, 8));
}

Digest Hasher::finish() {
  Digest out;
  SHA256_Final(out.data(), &impl_->ctx);
  return out;
}
#pragma GCC diagnostic pop

namespace {

Digest derive_key(std::uint64_t seed, std::size_t id, std::string_view domain) {
  Hasher h;
  h.add(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(domain.data()),
                                      domain.size()));
  h.add_u64(seed).add_u64(id);
  return h.finish();
}

class MacScheme final : public SignatureScheme {
 public:
  MacScheme(std::uint64_t seed, std::size_t processes) {
    keys_.reserve(processes);
    for (std::size_t i = 0; i < processes; ++i) keys_.push_back(derive_key(seed, i, "mac-key"));
  }

  Bytes sign(ProcessId signer, std::span<const std::uint8_t> msg) const override {
    Bytes out(32);
    unsigned int len = 0;
    const auto& key = keys_.at(signer);
    HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), msg.data(), msg.size(),
         out.data(), &len);
    out.resize(len);
    return out;
  }

  bool verify(ProcessId signer, std::span<const std::uint8_t> msg,
              std::span<const std::uint8_t> sig) const override {
    if (signer >= keys_.size()) return false;
    auto expected = sign(signer, msg);
    return expected.size() == sig.size() && std::equal(expected.begin(), expected.end(), sig.begin());
  }

  std::string_view name() const override { return "hmac-sha256"; }

 private:
  std::vector<Digest> keys_;
};

struct PkeyDeleter {
  void operator()(EVP_PKEY* k) const { EVP_PKEY_free(k); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

class Ed25519Scheme final : public SignatureScheme {
 public:
  Ed25519Scheme(std::uint64_t seed, std::size_t processes) {
    for (std::size_t i = 0; i < processes; ++i) {
      auto sk = derive_key(seed, i, "ed25519-key");
      PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, sk.data(), sk.size()));
      if (!key) throw std::runtime_error("ed25519 key generation failed");
      std::array<std::uint8_t, 32> pub{};
      std::size_t pub_len = pub.size();
      EVP_PKEY_get_raw_public_key(key.get(), pub.data(), &pub_len);
      PkeyPtr pk(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, pub.data(), pub_len));
      private_.push_back(std::move(key));
      public_.push_back(std::move(pk));
    }
  }

  Bytes sign(ProcessId signer, std::span<const std::uint8_t> msg) const override {
    std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
    EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, private_.at(signer).get());
    std::size_t len = 64;
    Bytes out(len);
    if (EVP_DigestSign(ctx.get(), out.data(), &len, msg.data(), msg.size()) != 1)
      throw std::runtime_error("ed25519 signing failed");
    out.resize(len);
    return out;
  }

  bool verify(ProcessId signer, std::span<const std::uint8_t> msg,
              std::span<const std::uint8_t> sig) const override {
    if (signer >= public_.size()) return false;
    std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
    EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, public_[signer].get());
    return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), msg.data(), msg.size()) == 1;
  }

  std::string_view name() const override { return "ed25519"; }

 private:
  std::vector<PkeyPtr> private_;
  std::vector<PkeyPtr> public_;
};

}  // namespace

std::unique_ptr<SignatureScheme> make_mac_scheme(std::uint64_t seed, std::size_t processes) {
  return std::make_unique<MacScheme>(seed, processes);
}

std::unique_ptr<SignatureScheme> make_ed25519_scheme(std::uint64_t seed, std::size_t processes) {
  return std::make_unique<Ed25519Scheme>(seed, processes);
}

}  // namespace iss::crypto
