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

#include "sigdoc/crypto.hpp"

#include <openssl/bio.h>
#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/err.h>
#include <openssl/evp.h>
#include <openssl/param_build.h>
#include <openssl/pem.h>
#include <openssl/rand.h>
#include <openssl/x509.h>

#include <algorithm>
#include <memory>
#include <optional>

#include "sigdoc/error.hpp"

namespace sigdoc::crypto {
namespace {

template <auto Fn>
struct Deleter {
  template <typename T>
  void operator()(T* p) const {
    Fn(p);
  }
};

using PkeyPtr = std::unique_ptr<EVP_PKEY, Deleter<EVP_PKEY_free>>;
using PkeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, Deleter<EVP_PKEY_CTX_free>>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, Deleter<EVP_MD_CTX_free>>;
using BnPtr = std::unique_ptr<BIGNUM, Deleter<BN_clear_free>>;
using BnCtxPtr = std::unique_ptr<BN_CTX, Deleter<BN_CTX_free>>;
using BioPtr = std::unique_ptr<BIO, Deleter<BIO_free_all>>;
using X509Ptr = std::unique_ptr<X509, Deleter<X509_free>>;
using ParamBldPtr = std::unique_ptr<OSSL_PARAM_BLD, Deleter<OSSL_PARAM_BLD_free>>;
using ParamPtr = std::unique_ptr<OSSL_PARAM, Deleter<OSSL_PARAM_free>>;
using P8Ptr = std::unique_ptr<PKCS8_PRIV_KEY_INFO, Deleter<PKCS8_PRIV_KEY_INFO_free>>;

std::string openssl_error() {
  const unsigned long code = ERR_get_error();
  ERR_clear_error();
  if (code == 0) return "unknown OpenSSL failure";
  char buf[256];
  ERR_error_string_n(code, buf, sizeof(buf));
  return buf;
}

[[noreturn]] void fail(Errc code, const std::string& what) {
  throw Error(code, what + " (" + openssl_error() + ")");
}

BnPtr new_bn() {
  BnPtr bn(BN_secure_new());
  if (!bn) fail(Errc::kInvalidArgument, "BN_new");
  return bn;
}

const EVP_MD* md_for(const AlgorithmId& digest_id) {
  if (digest_id == kSha1) return EVP_sha1();
  if (digest_id == kSha256) return EVP_sha256();
  throw Error(Errc::kUnknownAlgorithm, "no digest for '" + digest_id.uri + "'");
}

// Searches upward from a random odd start with the top two bits set, so the
// product of two such primes has exactly 2 * bits bits.
BnPtr random_prime(int bits, const BIGNUM* e, RandomSource& random,
                   BN_CTX* ctx) {
  Bytes buf(static_cast<std::size_t>(bits) / 8);
  BnPtr p = new_bn();
  auto reseed = [&] {
    random.fill(buf);
    BN_bin2bn(buf.data(), static_cast<int>(buf.size()), p.get());
    BN_set_bit(p.get(), bits - 1);
    BN_set_bit(p.get(), bits - 2);
    BN_set_bit(p.get(), 0);
  };
  reseed();
  BnPtr pm1 = new_bn();
  BnPtr g = new_bn();
  for (;;) {
    if (BN_check_prime(p.get(), ctx, nullptr) == 1) {
      BN_sub(pm1.get(), p.get(), BN_value_one());
      BN_gcd(g.get(), pm1.get(), e, ctx);
      if (BN_is_one(g.get())) return p;
    }
    BN_add_word(p.get(), 2);
    if (BN_num_bits(p.get()) != bits) {
      // Wrapped past the top; restart from fresh randomness.
      reseed();
    }
  }
}

PkeyPtr rsa_from_random(int bits, RandomSource& random) {
  if (bits < 1024 || bits % 16 != 0 || bits > 8192) {
    throw Error(Errc::kInvalidArgument,
                "RSA size must be a multiple of 16 in [1024, 8192], got " +
                    std::to_string(bits));
  }
  BnCtxPtr ctx(BN_CTX_secure_new());
  BnPtr e = new_bn();
  BN_set_word(e.get(), RSA_F4);
  BnPtr p = random_prime(bits / 2, e.get(), random, ctx.get());
  BnPtr q = random_prime(bits / 2, e.get(), random, ctx.get());
  while (BN_cmp(p.get(), q.get()) == 0) {
    q = random_prime(bits / 2, e.get(), random, ctx.get());
  }
  if (BN_cmp(p.get(), q.get()) < 0) std::swap(p, q);

  BnPtr n = new_bn(), pm1 = new_bn(), qm1 = new_bn(), phi = new_bn(),
        g = new_bn(), lambda = new_bn(), rem = new_bn(), d = new_bn(),
        dmp1 = new_bn(), dmq1 = new_bn(), iqmp = new_bn();
  BN_mul(n.get(), p.get(), q.get(), ctx.get());
  BN_sub(pm1.get(), p.get(), BN_value_one());
  BN_sub(qm1.get(), q.get(), BN_value_one());
  BN_mul(phi.get(), pm1.get(), qm1.get(), ctx.get());
  BN_gcd(g.get(), pm1.get(), qm1.get(), ctx.get());
  BN_div(lambda.get(), rem.get(), phi.get(), g.get(), ctx.get());
  if (!BN_mod_inverse(d.get(), e.get(), lambda.get(), ctx.get()) ||
      !BN_mod(dmp1.get(), d.get(), pm1.get(), ctx.get()) ||
      !BN_mod(dmq1.get(), d.get(), qm1.get(), ctx.get()) ||
      !BN_mod_inverse(iqmp.get(), q.get(), p.get(), ctx.get())) {
    fail(Errc::kInvalidArgument, "RSA key derivation");
  }

  ParamBldPtr bld(OSSL_PARAM_BLD_new());
  if (!bld ||
      !OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_N, n.get()) ||
      !OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_E, e.get()) ||
      !OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_D, d.get()) ||
      !OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_FACTOR1, p.get()) ||
      !OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_FACTOR2, q.get()) ||
      !OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_EXPONENT1, dmp1.get()) ||
      !OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_EXPONENT2, dmq1.get()) ||
      !OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_COEFFICIENT1, iqmp.get())) {
    fail(Errc::kInvalidArgument, "RSA parameter build");
  }
  ParamPtr params(OSSL_PARAM_BLD_to_param(bld.get()));
  PkeyCtxPtr pctx(EVP_PKEY_CTX_new_from_name(nullptr, "RSA", nullptr));
  EVP_PKEY* raw = nullptr;
  if (!params || !pctx || EVP_PKEY_fromdata_init(pctx.get()) <= 0 ||
      EVP_PKEY_fromdata(pctx.get(), &raw, EVP_PKEY_KEYPAIR, params.get()) <= 0) {
    fail(Errc::kInvalidArgument, "RSA key import");
  }
  return PkeyPtr(raw);
}

PkeyPtr ed25519_from_random(RandomSource& random) {
  std::uint8_t seed[32];
  random.fill(seed);
  PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed,
                                           sizeof(seed)));
  OPENSSL_cleanse(seed, sizeof(seed));
  if (!key) fail(Errc::kInvalidArgument, "Ed25519 key import");
  return key;
}

Bytes private_der(EVP_PKEY* key) {
  P8Ptr p8(EVP_PKEY2PKCS8(key));
  if (!p8) fail(Errc::kMalformedKey, "PKCS#8 conversion");
  unsigned char* out = nullptr;
  const int len = i2d_PKCS8_PRIV_KEY_INFO(p8.get(), &out);
  if (len <= 0) fail(Errc::kMalformedKey, "PKCS#8 encoding");
  Bytes der(out, out + len);
  OPENSSL_clear_free(out, static_cast<std::size_t>(len));
  return der;
}

Bytes public_der(EVP_PKEY* key) {
  unsigned char* out = nullptr;
  const int len = i2d_PUBKEY(key, &out);
  if (len <= 0) fail(Errc::kMalformedKey, "SubjectPublicKeyInfo encoding");
  Bytes der(out, out + len);
  OPENSSL_free(out);
  return der;
}

PkeyPtr load_private(std::span<const std::uint8_t> der) {
  const unsigned char* p = der.data();
  P8Ptr p8(d2i_PKCS8_PRIV_KEY_INFO(nullptr, &p, static_cast<long>(der.size())));
  if (!p8 || p != der.data() + der.size()) {
    fail(Errc::kMalformedKey, "private key is not PKCS#8 DER");
  }
  PkeyPtr key(EVP_PKCS82PKEY(p8.get()));
  if (!key) fail(Errc::kMalformedKey, "unsupported private key");
  return key;
}

PkeyPtr load_public(std::span<const std::uint8_t> der) {
  const unsigned char* p = der.data();
  PkeyPtr key(d2i_PUBKEY(nullptr, &p, static_cast<long>(der.size())));
  if (!key || p != der.data() + der.size()) {
    fail(Errc::kMalformedKey, "public key is not SubjectPublicKeyInfo DER");
  }
  return key;
}

bool key_fits(EVP_PKEY* key, KeyType type) {
  const int id = EVP_PKEY_get_base_id(key);
  return (type == KeyType::kRsa && id == EVP_PKEY_RSA) ||
         (type == KeyType::kEd25519 && id == EVP_PKEY_ED25519);
}

const EVP_MD* signing_md(const AlgorithmInfo& info) {
  if (info.key_type == KeyType::kEd25519) return nullptr;
  if (info.id == kRsaSha1) return EVP_sha1();
  return EVP_sha256();
}

std::string bio_contents(BIO* bio) {
  char* data = nullptr;
  const long len = BIO_get_mem_data(bio, &data);
  return std::string(data, static_cast<std::size_t>(len));
}

}  // namespace

AlgorithmRegistry::AlgorithmRegistry() {
  algorithms_ = {
      {kSha1, AlgorithmKind::kDigest, 20, KeyType::kRsa, {}, "sha1"},
      {kSha256, AlgorithmKind::kDigest, 32, KeyType::kRsa, {}, "sha256"},
      {kRsaSha1, AlgorithmKind::kSignature, 0, KeyType::kRsa, kSha1, "rsa-sha1"},
      {kRsaSha256, AlgorithmKind::kSignature, 0, KeyType::kRsa, kSha256,
       "rsa-sha256"},
      {kEd25519, AlgorithmKind::kSignature, 0, KeyType::kEd25519, kSha256,
       "ed25519"},
  };
}

const AlgorithmRegistry& AlgorithmRegistry::instance() {
  static const AlgorithmRegistry registry;
  return registry;
}

const AlgorithmInfo& AlgorithmRegistry::lookup(std::string_view uri) const {
  for (const auto& a : algorithms_) {
    if (a.id.uri == uri) return a;
  }
  throw Error(Errc::kUnknownAlgorithm, "unregistered algorithm '" +
                                           std::string(uri) + "'");
}

const AlgorithmInfo& AlgorithmRegistry::lookup(std::string_view uri,
                                               AlgorithmKind kind) const {
  const AlgorithmInfo& info = lookup(uri);
  if (info.kind != kind) {
    throw Error(Errc::kUnknownAlgorithm,
                "'" + std::string(uri) + "' is not a " +
                    (kind == AlgorithmKind::kDigest ? "digest" : "signature") +
                    " algorithm");
  }
  return info;
}

const AlgorithmInfo& AlgorithmRegistry::lookup_alias(std::string_view name) const {
  for (const auto& a : algorithms_) {
    if (a.alias == name) return a;
  }
  return lookup(name);
}

bool AlgorithmRegistry::contains(std::string_view uri) const {
  return std::any_of(algorithms_.begin(), algorithms_.end(),
                     [&](const AlgorithmInfo& a) { return a.id.uri == uri; });
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    fail(Errc::kInvalidArgument, "RAND_bytes");
  }
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = engine_();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(word & 0xFF);
      word >>= 8;
    }
  }
}

KeyPair generate_keypair(const AlgorithmId& algorithm, int size_hint,
                         RandomSource& random) {
  const AlgorithmInfo& info =
      AlgorithmRegistry::instance().lookup(algorithm.uri, AlgorithmKind::kSignature);
  PkeyPtr key = info.key_type == KeyType::kRsa
                    ? rsa_from_random(size_hint, random)
                    : ed25519_from_random(random);
  return KeyPair{private_der(key.get()), public_der(key.get()), algorithm};
}

Digest digest(std::span<const std::uint8_t> data, const AlgorithmId& algorithm) {
  const AlgorithmInfo& info =
      AlgorithmRegistry::instance().lookup(algorithm.uri, AlgorithmKind::kDigest);
  Bytes out(info.digest_size);
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, md_for(algorithm),
                 nullptr) != 1 ||
      len != out.size()) {
    fail(Errc::kUnknownAlgorithm, "digest computation");
  }
  return Digest{algorithm, std::move(out)};
}

Digest digest(std::string_view data, const AlgorithmId& algorithm) {
  return digest(std::span(reinterpret_cast<const std::uint8_t*>(data.data()),
                          data.size()),
                algorithm);
}

SignatureBytes sign(std::span<const std::uint8_t> private_key,
                    std::span<const std::uint8_t> data,
                    const AlgorithmId& algorithm) {
  const AlgorithmInfo& info =
      AlgorithmRegistry::instance().lookup(algorithm.uri, AlgorithmKind::kSignature);
  PkeyPtr key = load_private(private_key);
  if (!key_fits(key.get(), info.key_type)) {
    throw Error(Errc::kKeyMismatch,
                "private key does not fit '" + algorithm.uri + "'");
  }
  MdCtxPtr ctx(EVP_MD_CTX_new());
  std::size_t len = 0;
  if (!ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, signing_md(info), nullptr, key.get()) != 1 ||
      EVP_DigestSign(ctx.get(), nullptr, &len, data.data(), data.size()) != 1) {
    fail(Errc::kKeyMismatch, "signing setup");
  }
  Bytes out(len);
  if (EVP_DigestSign(ctx.get(), out.data(), &len, data.data(), data.size()) != 1) {
    fail(Errc::kKeyMismatch, "signing");
  }
  out.resize(len);
  return SignatureBytes{algorithm, std::move(out)};
}

bool verify(std::span<const std::uint8_t> public_key,
            std::span<const std::uint8_t> data, const SignatureBytes& sig) {
  const AlgorithmInfo& info = AlgorithmRegistry::instance().lookup(
      sig.algorithm.uri, AlgorithmKind::kSignature);
  PkeyPtr key = load_public(public_key);
  if (!key_fits(key.get(), info.key_type) || sig.value.empty()) return false;
  MdCtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, signing_md(info), nullptr,
                                   key.get()) != 1) {
    ERR_clear_error();
    return false;
  }
  const int rc = EVP_DigestVerify(ctx.get(), sig.value.data(), sig.value.size(),
                                  data.data(), data.size());
  ERR_clear_error();
  return rc == 1;
}

Bytes public_key_of(std::span<const std::uint8_t> private_key) {
  PkeyPtr key = load_private(private_key);
  return public_der(key.get());
}

std::string base64_encode(std::span<const std::uint8_t> data) {
  if (data.empty()) return {};
  std::string out(4 * ((data.size() + 2) / 3) + 1, '\0');
  const int len = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  data.data(), static_cast<int>(data.size()));
  out.resize(static_cast<std::size_t>(len));
  return out;
}

Bytes base64_decode(std::string_view text) {
  auto bad = [&](const std::string& why) -> Error {
    return Error(Errc::kMalformedBase64, why);
  };
  if (text.empty()) return {};
  if (text.size() % 4 != 0) throw bad("length is not a multiple of 4");
  std::size_t padding = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool alpha = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                       (c >= '0' && c <= '9') || c == '+' || c == '/';
    if (c == '=') {
      if (i < text.size() - 2) throw bad("padding inside the data");
      ++padding;
    } else if (!alpha) {
      throw bad("character outside the base64 alphabet");
    } else if (padding > 0) {
      throw bad("data after padding");
    }
  }
  Bytes out(text.size() / 4 * 3);
  const int len = EVP_DecodeBlock(out.data(),
                                  reinterpret_cast<const unsigned char*>(text.data()),
                                  static_cast<int>(text.size()));
  if (len < 0) throw bad("undecodable input");
  out.resize(static_cast<std::size_t>(len) - padding);
  return out;
}

std::string to_hex(std::span<const std::uint8_t> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::string key_pair_to_pem(const KeyPair& key) {
  PkeyPtr pkey = load_private(key.private_key);
  BioPtr bio(BIO_new(BIO_s_mem()));
  if (!bio || PEM_write_bio_PKCS8PrivateKey(bio.get(), pkey.get(), nullptr,
                                            nullptr, 0, nullptr, nullptr) != 1) {
    fail(Errc::kMalformedKey, "PEM encoding");
  }
  return "Algorithm: " + key.algorithm.uri + "\n" + bio_contents(bio.get());
}

KeyPair key_pair_from_pem(std::string_view pem) {
  std::optional<AlgorithmId> algorithm;
  if (pem.starts_with("Algorithm: ")) {
    const auto eol = pem.find('\n');
    std::string_view uri = pem.substr(11, eol - 11);
    while (!uri.empty() && (uri.back() == '\r' || uri.back() == ' ')) {
      uri.remove_suffix(1);
    }
    algorithm = AlgorithmRegistry::instance()
                    .lookup(uri, AlgorithmKind::kSignature)
                    .id;
  }
  BioPtr bio(BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size())));
  PkeyPtr pkey(PEM_read_bio_PrivateKey(bio.get(), nullptr, nullptr, nullptr));
  if (!pkey) fail(Errc::kMalformedKey, "no private key in PEM input");
  if (!algorithm) {
    algorithm = EVP_PKEY_get_base_id(pkey.get()) == EVP_PKEY_ED25519 ? kEd25519
                                                                     : kRsaSha1;
  }
  const AlgorithmInfo& info = AlgorithmRegistry::instance().lookup(algorithm->uri);
  if (!key_fits(pkey.get(), info.key_type)) {
    throw Error(Errc::kKeyMismatch,
                "PEM key does not fit '" + algorithm->uri + "'");
  }
  return KeyPair{private_der(pkey.get()), public_der(pkey.get()), *algorithm};
}

Bytes make_self_signed_certificate(const KeyPair& key,
                                   const std::string& common_name,
                                   RandomSource& random, int validity_days) {
  PkeyPtr pkey = load_private(key.private_key);
  X509Ptr cert(X509_new());
  if (!cert) fail(Errc::kInvalidArgument, "X509_new");
  std::uint8_t serial_bytes[16];
  random.fill(serial_bytes);
  serial_bytes[0] &= 0x7F;
  serial_bytes[0] |= 0x01;
  BnPtr serial = new_bn();
  BN_bin2bn(serial_bytes, sizeof(serial_bytes), serial.get());
  X509_NAME* name = X509_get_subject_name(cert.get());
  if (X509_set_version(cert.get(), 2) != 1 ||
      !BN_to_ASN1_INTEGER(serial.get(), X509_get_serialNumber(cert.get())) ||
      !X509_gmtime_adj(X509_getm_notBefore(cert.get()), 0) ||
      !X509_gmtime_adj(X509_getm_notAfter(cert.get()),
                       static_cast<long>(validity_days) * 24 * 3600) ||
      X509_NAME_add_entry_by_txt(
          name, "CN", MBSTRING_UTF8,
          reinterpret_cast<const unsigned char*>(common_name.c_str()), -1, -1,
          0) != 1 ||
      X509_set_issuer_name(cert.get(), name) != 1 ||
      X509_set_pubkey(cert.get(), pkey.get()) != 1) {
    fail(Errc::kInvalidArgument, "certificate assembly");
  }
  const AlgorithmInfo& info = AlgorithmRegistry::instance().lookup(key.algorithm.uri);
  const EVP_MD* md = info.key_type == KeyType::kEd25519 ? nullptr : EVP_sha256();
  if (X509_sign(cert.get(), pkey.get(), md) <= 0) {
    fail(Errc::kInvalidArgument, "certificate signing");
  }
  unsigned char* out = nullptr;
  const int len = i2d_X509(cert.get(), &out);
  if (len <= 0) fail(Errc::kInvalidArgument, "certificate encoding");
  Bytes der(out, out + len);
  OPENSSL_free(out);
  return der;
}

Bytes certificate_public_key(std::span<const std::uint8_t> certificate_der) {
  const unsigned char* p = certificate_der.data();
  X509Ptr cert(d2i_X509(nullptr, &p, static_cast<long>(certificate_der.size())));
  if (!cert || p != certificate_der.data() + certificate_der.size()) {
    fail(Errc::kMalformedKey, "certificate is not X.509 DER");
  }
  EVP_PKEY* key = X509_get0_pubkey(cert.get());
  if (!key) fail(Errc::kMalformedKey, "certificate carries no usable key");
  return public_der(key);
}

std::string certificate_to_pem(std::span<const std::uint8_t> certificate_der) {
  const unsigned char* p = certificate_der.data();
  X509Ptr cert(d2i_X509(nullptr, &p, static_cast<long>(certificate_der.size())));
  if (!cert) fail(Errc::kMalformedKey, "certificate is not X.509 DER");
  BioPtr bio(BIO_new(BIO_s_mem()));
  if (!bio || PEM_write_bio_X509(bio.get(), cert.get()) != 1) {
    fail(Errc::kMalformedKey, "certificate PEM encoding");
  }
  return bio_contents(bio.get());
}

Bytes certificate_from_file_bytes(std::span<const std::uint8_t> contents) {
  const std::string_view text(reinterpret_cast<const char*>(contents.data()),
                              contents.size());
  if (text.find("-----BEGIN CERTIFICATE-----") == std::string_view::npos) {
    certificate_public_key(contents);  // validates the DER
    return Bytes(contents.begin(), contents.end());
  }
  BioPtr bio(BIO_new_mem_buf(text.data(), static_cast<int>(text.size())));
  X509Ptr cert(PEM_read_bio_X509(bio.get(), nullptr, nullptr, nullptr));
  if (!cert) fail(Errc::kMalformedKey, "no certificate in PEM input");
  unsigned char* out = nullptr;
  const int len = i2d_X509(cert.get(), &out);
  if (len <= 0) fail(Errc::kMalformedKey, "certificate encoding");
  Bytes der(out, out + len);
  OPENSSL_free(out);
  return der;
}

}  // namespace sigdoc::crypto
