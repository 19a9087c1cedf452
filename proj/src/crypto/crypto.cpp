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

#include "careledger/crypto/crypto.hpp"

#include <openssl/err.h>
#include <openssl/evp.h>
#include <openssl/kdf.h>
#include <openssl/rand.h>

#include <algorithm>
#include <climits>
#include <memory>

namespace careledger::crypto {

namespace {

constexpr std::string_view kWrapInfo = "careledger-wrap-v1";

std::string openssl_error(std::string_view what) {
  std::string msg(what);
  const unsigned long err = ERR_get_error();
  if (err != 0) {
    char buf[256];
    ERR_error_string_n(err, buf, sizeof(buf));
    msg += ": ";
    msg += buf;
  }
  ERR_clear_error();
  return msg;
}

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct PkeyCtxDeleter {
  void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};
struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};

using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using PkeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;
using CipherCtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

PkeyPtr raw_private(int type, ByteView raw) {
  PkeyPtr key(EVP_PKEY_new_raw_private_key(type, nullptr, raw.data(), raw.size()));
  if (!key) throw CryptoError(openssl_error("cannot load private key"));
  return key;
}

PkeyPtr raw_public(int type, ByteView raw) {
  PkeyPtr key(EVP_PKEY_new_raw_public_key(type, nullptr, raw.data(), raw.size()));
  if (!key) throw CryptoError(openssl_error("cannot load public key"));
  return key;
}

std::array<std::uint8_t, kKeySize> raw_public_of(EVP_PKEY* key) {
  std::array<std::uint8_t, kKeySize> out{};
  std::size_t len = out.size();
  if (EVP_PKEY_get_raw_public_key(key, out.data(), &len) != 1 || len != kKeySize) {
    throw CryptoError(openssl_error("cannot extract public key"));
  }
  return out;
}

void fill_random(std::uint8_t* out, std::size_t n) {
  while (n > 0) {
    const int chunk = static_cast<int>(std::min<std::size_t>(n, INT_MAX));
    if (RAND_bytes(out, chunk) != 1) {
      throw CryptoError(openssl_error("entropy source failure"));
    }
    out += chunk;
    n -= static_cast<std::size_t>(chunk);
  }
}

template <std::size_t N>
std::array<std::uint8_t, N> random_array() {
  std::array<std::uint8_t, N> out{};
  fill_random(out.data(), out.size());
  return out;
}

int checked_len(std::size_t n) {
  if (n > static_cast<std::size_t>(INT_MAX)) {
    throw CryptoError("input too large for a single AEAD call");
  }
  return static_cast<int>(n);
}

// X25519(private, peer) -> 32-byte shared secret. Rejects the all-zero output
// produced by small-order peer points.
std::array<std::uint8_t, kKeySize> x25519(const EncPrivateKey& priv,
                                          const EncPublicKey& peer) {
  PkeyPtr own = raw_private(EVP_PKEY_X25519, priv.view());
  PkeyPtr other = raw_public(EVP_PKEY_X25519, peer.view());
  PkeyCtxPtr ctx(EVP_PKEY_CTX_new(own.get(), nullptr));
  std::array<std::uint8_t, kKeySize> shared{};
  std::size_t len = shared.size();
  if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
      EVP_PKEY_derive_set_peer(ctx.get(), other.get()) != 1 ||
      EVP_PKEY_derive(ctx.get(), shared.data(), &len) != 1 || len != kKeySize) {
    throw CryptoError(openssl_error("key agreement failed"));
  }
  if (std::all_of(shared.begin(), shared.end(), [](auto b) { return b == 0; })) {
    throw CryptoError("key agreement produced a degenerate secret");
  }
  return shared;
}

FileKey hkdf_sha256(ByteView ikm, ByteView salt, std::string_view info) {
  PkeyCtxPtr ctx(EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr));
  std::array<std::uint8_t, kKeySize> out{};
  std::size_t len = out.size();
  if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
      EVP_PKEY_CTX_set_hkdf_md(ctx.get(), EVP_sha256()) != 1 ||
      EVP_PKEY_CTX_set1_hkdf_salt(ctx.get(), salt.data(),
                                  static_cast<int>(salt.size())) != 1 ||
      EVP_PKEY_CTX_set1_hkdf_key(ctx.get(), ikm.data(),
                                 static_cast<int>(ikm.size())) != 1 ||
      EVP_PKEY_CTX_add1_hkdf_info(
          ctx.get(), reinterpret_cast<const unsigned char*>(info.data()),
          static_cast<int>(info.size())) != 1 ||
      EVP_PKEY_derive(ctx.get(), out.data(), &len) != 1) {
    throw CryptoError(openssl_error("HKDF failed"));
  }
  FileKey key(out);
  secure_wipe(out.data(), out.size());
  return key;
}

}  // namespace

bool Digest::is_zero() const {
  return std::all_of(bytes.begin(), bytes.end(), [](auto b) { return b == 0; });
}

Digest Digest::from_hex(std::string_view hex) {
  return Digest{from_hex_fixed<kDigestSize>(hex)};
}

Digest Digest::from_bytes(ByteView raw) {
  if (raw.size() != kDigestSize) {
    throw DecodeError("digest must be 32 bytes");
  }
  Digest d;
  std::copy(raw.begin(), raw.end(), d.bytes.begin());
  return d;
}

struct Sha256::Impl {
  MdCtxPtr ctx{EVP_MD_CTX_new()};
};

Sha256::Sha256() : impl_(std::make_unique<Impl>()) {
  if (!impl_->ctx || EVP_DigestInit_ex(impl_->ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw CryptoError(openssl_error("SHA-256 init failed"));
  }
}

Sha256::~Sha256() = default;

Sha256& Sha256::update(ByteView data) {
  if (!data.empty() &&
      EVP_DigestUpdate(impl_->ctx.get(), data.data(), data.size()) != 1) {
    throw CryptoError(openssl_error("SHA-256 update failed"));
  }
  return *this;
}

Digest Sha256::finish() {
  Digest d;
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(impl_->ctx.get(), d.bytes.data(), &len) != 1 ||
      len != kDigestSize) {
    throw CryptoError(openssl_error("SHA-256 final failed"));
  }
  return d;
}

Digest content_hash(ByteView data) {
  Digest d;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw CryptoError(openssl_error("SHA-256 failed"));
  }
  return d;
}

Bytes random_bytes(std::size_t n) {
  Bytes out(n);
  fill_random(out.data(), n);
  return out;
}

FileKey generate_file_key() {
  auto raw = random_array<kKeySize>();
  FileKey key(raw);
  secure_wipe(raw.data(), raw.size());
  return key;
}

SignPublicKey derive_sign_public(const SignPrivateKey& key) {
  PkeyPtr pkey = raw_private(EVP_PKEY_ED25519, key.view());
  return SignPublicKey{raw_public_of(pkey.get())};
}

EncPublicKey derive_enc_public(const EncPrivateKey& key) {
  PkeyPtr pkey = raw_private(EVP_PKEY_X25519, key.view());
  return EncPublicKey{raw_public_of(pkey.get())};
}

KeyPair generate_keypair(std::string user_id) {
  if (user_id.empty()) {
    throw std::invalid_argument("user id must not be empty");
  }
  auto sign_seed = random_array<kKeySize>();
  auto enc_scalar = random_array<kKeySize>();
  KeyPair kp;
  kp.user_id = std::move(user_id);
  kp.sign_private = SignPrivateKey(sign_seed);
  kp.enc_private = EncPrivateKey(enc_scalar);
  secure_wipe(sign_seed.data(), sign_seed.size());
  secure_wipe(enc_scalar.data(), enc_scalar.size());
  kp.sign_public = derive_sign_public(kp.sign_private);
  kp.enc_public = derive_enc_public(kp.enc_private);
  return kp;
}

Bytes sign(const SignPrivateKey& key, ByteView message) {
  PkeyPtr pkey = raw_private(EVP_PKEY_ED25519, key.view());
  MdCtxPtr ctx(EVP_MD_CTX_new());
  Bytes sig(kSignatureSize);
  std::size_t len = sig.size();
  if (!ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1 ||
      EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1 ||
      len != kSignatureSize) {
    throw CryptoError(openssl_error("signing failed"));
  }
  return sig;
}

bool verify(const SignPublicKey& key, ByteView message, ByteView signature) {
  if (signature.size() != kSignatureSize) {
    throw DecodeError("signature must be 64 bytes, got " +
                      std::to_string(signature.size()));
  }
  PkeyPtr pkey = raw_public(EVP_PKEY_ED25519, key.view());
  MdCtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx ||
      EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) {
    throw CryptoError(openssl_error("verify init failed"));
  }
  const int rc = EVP_DigestVerify(ctx.get(), signature.data(), signature.size(),
                                  message.data(), message.size());
  ERR_clear_error();
  return rc == 1;
}

Bytes SealedBlob::serialize() const {
  Bytes out;
  out.reserve(nonce.size() + ciphertext.size() + tag.size());
  out.insert(out.end(), nonce.begin(), nonce.end());
  out.insert(out.end(), ciphertext.begin(), ciphertext.end());
  out.insert(out.end(), tag.begin(), tag.end());
  return out;
}

SealedBlob SealedBlob::parse(ByteView wire) {
  if (wire.size() < kNonceSize + kTagSize) {
    throw DecodeError("sealed blob shorter than nonce and tag");
  }
  SealedBlob blob;
  std::copy_n(wire.begin(), kNonceSize, blob.nonce.begin());
  blob.ciphertext.assign(wire.begin() + kNonceSize, wire.end() - kTagSize);
  std::copy(wire.end() - kTagSize, wire.end(), blob.tag.begin());
  return blob;
}

namespace detail {

SealedBlob aead_seal_with_nonce(const FileKey& key,
                                const std::array<std::uint8_t, kNonceSize>& nonce,
                                ByteView plaintext, ByteView aad) {
  CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
  SealedBlob blob;
  blob.nonce = nonce;
  blob.ciphertext.resize(plaintext.size());
  int len = 0;
  if (!ctx ||
      EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceSize, nullptr) != 1 ||
      EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.view().data(),
                         nonce.data()) != 1) {
    throw CryptoError(openssl_error("AES-GCM init failed"));
  }
  if (!aad.empty() &&
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), checked_len(aad.size())) != 1) {
    throw CryptoError(openssl_error("AES-GCM aad failed"));
  }
  if (!plaintext.empty() &&
      EVP_EncryptUpdate(ctx.get(), blob.ciphertext.data(), &len, plaintext.data(),
                        checked_len(plaintext.size())) != 1) {
    throw CryptoError(openssl_error("AES-GCM encrypt failed"));
  }
  // GCM emits nothing at finalisation; the scratch buffer keeps the pointer
  // valid for empty plaintexts.
  std::uint8_t scratch[16];
  int tail = 0;
  if (EVP_EncryptFinal_ex(ctx.get(), scratch, &tail) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagSize,
                          blob.tag.data()) != 1) {
    throw CryptoError(openssl_error("AES-GCM finalise failed"));
  }
  return blob;
}

WrappedKey wrap_with_ephemeral(std::string recipient_id,
                               const EncPublicKey& recipient,
                               const FileKey& file_key,
                               const EncPrivateKey& ephemeral,
                               const std::array<std::uint8_t, kNonceSize>& nonce) {
  const EncPublicKey eph_public = derive_enc_public(ephemeral);
  auto shared = x25519(ephemeral, recipient);

  Bytes context;
  context.insert(context.end(), eph_public.bytes.begin(), eph_public.bytes.end());
  context.insert(context.end(), recipient.bytes.begin(), recipient.bytes.end());
  const FileKey kek = hkdf_sha256(shared, context, kWrapInfo);
  secure_wipe(shared.data(), shared.size());

  SealedBlob sealed = aead_seal_with_nonce(kek, nonce, file_key.view(), context);
  WrappedKey out;
  out.recipient_id = std::move(recipient_id);
  out.wrapped_bytes.reserve(kWrappedKeySize);
  out.wrapped_bytes.insert(out.wrapped_bytes.end(), eph_public.bytes.begin(),
                           eph_public.bytes.end());
  Bytes body = sealed.serialize();
  out.wrapped_bytes.insert(out.wrapped_bytes.end(), body.begin(), body.end());
  return out;
}

}  // namespace detail

SealedBlob aead_seal(const FileKey& key, ByteView plaintext, ByteView aad) {
  return detail::aead_seal_with_nonce(key, random_array<kNonceSize>(), plaintext, aad);
}

Bytes aead_open(const FileKey& key, const SealedBlob& blob, ByteView aad) {
  CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
  Bytes plaintext(blob.ciphertext.size());
  int len = 0;
  if (!ctx ||
      EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceSize, nullptr) != 1 ||
      EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.view().data(),
                         blob.nonce.data()) != 1) {
    throw CryptoError(openssl_error("AES-GCM init failed"));
  }
  if (!aad.empty() &&
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), checked_len(aad.size())) != 1) {
    throw CryptoError(openssl_error("AES-GCM aad failed"));
  }
  if (!blob.ciphertext.empty() &&
      EVP_DecryptUpdate(ctx.get(), plaintext.data(), &len, blob.ciphertext.data(),
                        checked_len(blob.ciphertext.size())) != 1) {
    throw CryptoError(openssl_error("AES-GCM decrypt failed"));
  }
  auto tag = blob.tag;
  std::uint8_t scratch[16];
  int tail = 0;
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagSize, tag.data()) != 1 ||
      EVP_DecryptFinal_ex(ctx.get(), scratch, &tail) != 1) {
    secure_wipe(plaintext.data(), plaintext.size());
    ERR_clear_error();
    throw CryptoError("authenticated decryption failed");
  }
  return plaintext;
}

WrappedKey wrap_file_key(std::string recipient_id, const EncPublicKey& recipient,
                         const FileKey& file_key) {
  auto eph_raw = random_array<kKeySize>();
  const EncPrivateKey ephemeral(eph_raw);
  secure_wipe(eph_raw.data(), eph_raw.size());
  return detail::wrap_with_ephemeral(std::move(recipient_id), recipient, file_key,
                                     ephemeral, random_array<kNonceSize>());
}

FileKey unwrap_file_key(const EncPrivateKey& key, const WrappedKey& wrapped) {
  const Bytes& w = wrapped.wrapped_bytes;
  if (w.size() != kWrappedKeySize) {
    throw CryptoError("wrapped key has wrong length");
  }
  const EncPublicKey eph_public =
      EncPublicKey::from_bytes(ByteView(w.data(), kKeySize));
  const EncPublicKey own_public = derive_enc_public(key);
  auto shared = x25519(key, eph_public);

  Bytes context;
  context.insert(context.end(), eph_public.bytes.begin(), eph_public.bytes.end());
  context.insert(context.end(), own_public.bytes.begin(), own_public.bytes.end());
  const FileKey kek = hkdf_sha256(shared, context, kWrapInfo);
  secure_wipe(shared.data(), shared.size());

  const SealedBlob sealed =
      SealedBlob::parse(ByteView(w.data() + kKeySize, w.size() - kKeySize));
  Bytes raw = aead_open(kek, sealed, context);
  FileKey out = FileKey::from_bytes(raw);
  secure_wipe(raw.data(), raw.size());
  return out;
}

}  // namespace careledger::crypto
