// Copyright 2026 The sigdoc Authors
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

// Hash-then-sign primitives over byte sequences, addressed by the algorithm
// URIs used in XML Signature documents.
//
// Keys travel as DER: private keys as PKCS#8, public keys as
// SubjectPublicKeyInfo. Key generation draws every random byte from an
// injected RandomSource, so a seeded source reproduces the same pair.

#ifndef SIGDOC_CRYPTO_HPP_
#define SIGDOC_CRYPTO_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sigdoc::crypto {

using Bytes = std::vector<std::uint8_t>;

struct AlgorithmId {
  std::string uri;

  bool operator==(const AlgorithmId&) const = default;
};

inline const AlgorithmId kSha1{"http://www.w3.org/2000/09/xmldsig#sha1"};
inline const AlgorithmId kSha256{"http://www.w3.org/2001/04/xmlenc#sha256"};
inline const AlgorithmId kRsaSha1{"http://www.w3.org/2000/09/xmldsig#rsa-sha1"};
inline const AlgorithmId kRsaSha256{
    "http://www.w3.org/2001/04/xmldsig-more#rsa-sha256"};
inline const AlgorithmId kEd25519{
    "http://www.w3.org/2021/04/xmldsig-more#eddsa-ed25519"};

enum class AlgorithmKind { kDigest, kSignature };
enum class KeyType { kRsa, kEd25519 };

struct AlgorithmInfo {
  AlgorithmId id;
  AlgorithmKind kind;
  // Digest output length in bytes (digests only).
  std::size_t digest_size = 0;
  // Signature algorithms: key family, and the digest used for references
  // signed alongside it.
  KeyType key_type = KeyType::kRsa;
  AlgorithmId reference_digest;
  // Short alias accepted on the command line ("sha1", "rsa-sha1", ...).
  std::string alias;
};

// Read-only table of supported algorithms, built once.
class AlgorithmRegistry {
 public:
  static const AlgorithmRegistry& instance();

  // Throws Errc::kUnknownAlgorithm.
  const AlgorithmInfo& lookup(std::string_view uri) const;
  const AlgorithmInfo& lookup(std::string_view uri, AlgorithmKind kind) const;
  // Accepts either a URI or an alias.
  const AlgorithmInfo& lookup_alias(std::string_view name) const;
  bool contains(std::string_view uri) const;

  const std::vector<AlgorithmInfo>& all() const { return algorithms_; }

 private:
  AlgorithmRegistry();
  std::vector<AlgorithmInfo> algorithms_;
};

class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

// Operating-system entropy via OpenSSL.
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// Reproducible stream for tests and `keygen --seed`. Not for real keys.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::mt19937_64 engine_;
};

struct KeyPair {
  Bytes private_key;  // PKCS#8 DER
  Bytes public_key;   // SubjectPublicKeyInfo DER
  AlgorithmId algorithm;

  bool operator==(const KeyPair&) const = default;
};

struct Digest {
  AlgorithmId algorithm;
  Bytes value;

  bool operator==(const Digest&) const = default;
};

struct SignatureBytes {
  AlgorithmId algorithm;
  Bytes value;

  bool operator==(const SignatureBytes&) const = default;
};

// size_hint is the RSA modulus size in bits (>= 1024, even); ignored for
// Ed25519. Throws Errc::kUnknownAlgorithm or kInvalidArgument.
KeyPair generate_keypair(const AlgorithmId& algorithm, int size_hint,
                         RandomSource& random);

Digest digest(std::span<const std::uint8_t> data, const AlgorithmId& algorithm);
Digest digest(std::string_view data, const AlgorithmId& algorithm);

// Throws kUnknownAlgorithm, kMalformedKey, or kKeyMismatch when the key
// family does not fit the algorithm.
SignatureBytes sign(std::span<const std::uint8_t> private_key,
                    std::span<const std::uint8_t> data,
                    const AlgorithmId& algorithm);

// False on any mismatch, including a key of the wrong family. Throws only for
// an unregistered algorithm or an unparsable key.
bool verify(std::span<const std::uint8_t> public_key,
            std::span<const std::uint8_t> data, const SignatureBytes& sig);

// Derives the SubjectPublicKeyInfo from a PKCS#8 private key.
Bytes public_key_of(std::span<const std::uint8_t> private_key);

std::string base64_encode(std::span<const std::uint8_t> data);
// Standard alphabet, '=' padding required, no whitespace.
// Throws Errc::kMalformedBase64.
Bytes base64_decode(std::string_view text);

std::string to_hex(std::span<const std::uint8_t> data);

// PEM persistence. The private key PEM carries everything needed to rebuild
// the pair; the algorithm URI is stored in a leading "Algorithm:" line.
std::string key_pair_to_pem(const KeyPair& key);
KeyPair key_pair_from_pem(std::string_view pem);

// Self-signed X.509 certificate (DER) binding `common_name` to the pair.
// The serial number comes from `random`.
Bytes make_self_signed_certificate(const KeyPair& key,
                                   const std::string& common_name,
                                   RandomSource& random, int validity_days = 3650);
// Subject public key (SubjectPublicKeyInfo DER) of a DER certificate.
// Throws Errc::kMalformedKey.
Bytes certificate_public_key(std::span<const std::uint8_t> certificate_der);
std::string certificate_to_pem(std::span<const std::uint8_t> certificate_der);
// Accepts PEM or raw DER.
Bytes certificate_from_file_bytes(std::span<const std::uint8_t> contents);

}  // namespace sigdoc::crypto

#endif  // SIGDOC_CRYPTO_HPP_
