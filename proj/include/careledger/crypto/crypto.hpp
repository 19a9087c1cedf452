// Copyright 2026 The CareLedger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Cryptographic primitives used across the node and its clients.
//
//   content hashing      SHA-256
//   file encryption      AES-256-GCM, 96-bit random nonce, 128-bit tag
//   signatures           Ed25519
//   file-key wrapping    X25519 ephemeral agreement + HKDF-SHA256 +
//                        AES-256-GCM ("sealed box")
//
// Every function here is either pure or only touches the OpenSSL RNG, which
// is internally locked, so all of them are safe to call concurrently.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "careledger/crypto/bytes.hpp"

namespace careledger::crypto {

inline constexpr std::size_t kDigestSize = 32;
inline constexpr std::size_t kKeySize = 32;
inline constexpr std::size_t kSignatureSize = 64;
inline constexpr std::size_t kNonceSize = 12;
inline constexpr std::size_t kTagSize = 16;
// ephemeral public key || nonce || encrypted file key || tag
inline constexpr std::size_t kWrappedKeySize =
    kKeySize + kNonceSize + kKeySize + kTagSize;

// Authenticated decryption failed, key agreement failed, or the entropy
// source is unavailable. Callers cannot tell which input was wrong.
class CryptoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A SHA-256 value. Used both as the content address of a blob and as a
// transaction or block id.
struct Digest {
  std::array<std::uint8_t, kDigestSize> bytes{};

  std::string hex() const { return to_hex(bytes); }
  ByteView view() const { return bytes; }
  bool is_zero() const;

  static Digest from_hex(std::string_view hex);
  static Digest from_bytes(ByteView raw);

  auto operator<=>(const Digest&) const = default;
};

Digest content_hash(ByteView data);
inline Digest content_hash(std::string_view data) {
  return content_hash(as_bytes(data));
}

// Incremental SHA-256, for hashing layouts assembled from several fields.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(ByteView data);
  Sha256& update(std::string_view data) { return update(as_bytes(data)); }
  Digest finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// 32-byte public key. The tag keeps signing and key-agreement keys apart.
template <typename Tag>
struct PublicKey {
  std::array<std::uint8_t, kKeySize> bytes{};

  std::string hex() const { return to_hex(bytes); }
  ByteView view() const { return bytes; }

  static PublicKey from_hex(std::string_view hex) {
    return PublicKey{from_hex_fixed<kKeySize>(hex)};
  }
  static PublicKey from_bytes(ByteView raw) {
    if (raw.size() != kKeySize) {
      throw DecodeError("public key must be 32 bytes");
    }
    PublicKey k;
    std::copy(raw.begin(), raw.end(), k.bytes.begin());
    return k;
  }

  auto operator<=>(const PublicKey&) const = default;
};

// 32 bytes of secret material, wiped on destruction.
template <typename Tag>
class SecretKey {
 public:
  SecretKey() = default;
  explicit SecretKey(const std::array<std::uint8_t, kKeySize>& raw)
      : bytes_(raw) {}
  SecretKey(const SecretKey&) = default;
  SecretKey& operator=(const SecretKey&) = default;
  ~SecretKey() { secure_wipe(bytes_.data(), bytes_.size()); }

  static SecretKey from_bytes(ByteView raw) {
    if (raw.size() != kKeySize) {
      throw DecodeError("secret key must be exactly 32 bytes");
    }
    std::array<std::uint8_t, kKeySize> a{};
    std::copy(raw.begin(), raw.end(), a.begin());
    SecretKey k(a);
    secure_wipe(a.data(), a.size());
    return k;
  }
  static SecretKey from_hex(std::string_view hex) {
    Bytes raw = from_hex_fixed_bytes(hex);
    SecretKey k = from_bytes(raw);
    secure_wipe(raw.data(), raw.size());
    return k;
  }

  ByteView view() const { return bytes_; }
  std::string hex() const { return to_hex(bytes_); }

  bool operator==(const SecretKey&) const = default;

 private:
  static Bytes from_hex_fixed_bytes(std::string_view hex) {
    auto a = from_hex_fixed<kKeySize>(hex);
    return Bytes(a.begin(), a.end());
  }

  std::array<std::uint8_t, kKeySize> bytes_{};
};

struct SignKeyTag {};
struct EncKeyTag {};
struct FileKeyTag {};

using SignPublicKey = PublicKey<SignKeyTag>;
using EncPublicKey = PublicKey<EncKeyTag>;
using SignPrivateKey = SecretKey<SignKeyTag>;  // Ed25519 seed
using EncPrivateKey = SecretKey<EncKeyTag>;    // X25519 scalar
using FileKey = SecretKey<FileKeyTag>;         // AES-256 key, one per file

struct KeyPair {
  std::string user_id;
  SignPublicKey sign_public;
  SignPrivateKey sign_private;
  EncPublicKey enc_public;
  EncPrivateKey enc_private;
};

// Fresh signing and key-agreement keys from the OS-seeded CSPRNG.
// Throws std::invalid_argument on an empty id, CryptoError on RNG failure.
KeyPair generate_keypair(std::string user_id);

SignPublicKey derive_sign_public(const SignPrivateKey& key);
EncPublicKey derive_enc_public(const EncPrivateKey& key);

Bytes random_bytes(std::size_t n);
FileKey generate_file_key();

// Ed25519 over the raw message bytes; the result is 64 bytes.
Bytes sign(const SignPrivateKey& key, ByteView message);

// False for a well-formed signature that does not verify. A signature that is
// not 64 bytes is a DecodeError, never a silent false.
bool verify(const SignPublicKey& key, ByteView message, ByteView signature);

// nonce || ciphertext || tag on the wire.
struct SealedBlob {
  std::array<std::uint8_t, kNonceSize> nonce{};
  Bytes ciphertext;
  std::array<std::uint8_t, kTagSize> tag{};

  Bytes serialize() const;
  static SealedBlob parse(ByteView wire);

  bool operator==(const SealedBlob&) const = default;
};

SealedBlob aead_seal(const FileKey& key, ByteView plaintext, ByteView aad);
Bytes aead_open(const FileKey& key, const SealedBlob& blob, ByteView aad);

struct WrappedKey {
  std::string recipient_id;
  Bytes wrapped_bytes;

  bool operator==(const WrappedKey&) const = default;
};

WrappedKey wrap_file_key(std::string recipient_id,
                         const EncPublicKey& recipient,
                         const FileKey& file_key);
FileKey unwrap_file_key(const EncPrivateKey& key, const WrappedKey& wrapped);

namespace detail {

// Deterministic variants for known-answer tests.
SealedBlob aead_seal_with_nonce(const FileKey& key,
                                const std::array<std::uint8_t, kNonceSize>& nonce,
                                ByteView plaintext, ByteView aad);
WrappedKey wrap_with_ephemeral(std::string recipient_id,
                               const EncPublicKey& recipient,
                               const FileKey& file_key,
                               const EncPrivateKey& ephemeral,
                               const std::array<std::uint8_t, kNonceSize>& nonce);

}  // namespace detail

}  // namespace careledger::crypto
