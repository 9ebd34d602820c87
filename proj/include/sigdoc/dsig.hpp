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

// XML Signature envelopes: SignedInfo with its references, SignatureValue,
// KeyInfo and an Object carrying signed and unsigned properties.
//
// Reference URIs are either "#/"-prefixed node paths or plain labels naming
// an external blob. A path whose first step is dsig:Signature addresses the
// signature itself, so several parallel signatures in one host never collide;
// every other target is resolved by the caller.
//
// SignedInfo and KeyInfo are held as values and re-emitted in a fixed layout
// before canonicalization. The two property elements are kept verbatim.

#ifndef SIGDOC_DSIG_HPP_
#define SIGDOC_DSIG_HPP_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sigdoc/crypto.hpp"
#include "sigdoc/xml.hpp"

namespace sigdoc::dsig {

using Bytes = crypto::Bytes;

inline constexpr std::string_view kDsigNamespace =
    "http://www.w3.org/2000/09/xmldsig#";
inline constexpr std::string_view kDsig11Namespace =
    "http://www.w3.org/2009/xmldsig11#";
inline constexpr std::string_view kAidaNamespace = "http://www.polito.it";
inline constexpr std::string_view kCanonicalizationUri =
    "http://www.w3.org/TR/2001/REC-xml-c14n-20010315";

// Reference targets for the signature's own parts.
inline constexpr std::string_view kKeyInfoUri = "#/dsig:Signature/dsig:KeyInfo";
inline constexpr std::string_view kSignedPropertiesUri =
    "#/dsig:Signature/dsig:Object/aida:properties/aida:signedProperties";
// Default enveloping content target.
inline constexpr std::string_view kSignedContentUri = "#/aida:signedContent";

struct Reference {
  std::string uri;
  crypto::AlgorithmId digest_method;
  Bytes digest_value;

  bool targets_node() const { return uri.starts_with("#"); }
  // Throws Errc::kInvalidArgument for a blob label.
  xml::NodePath path() const;
  // True for targets inside the signature element itself.
  bool is_self_reference() const;

  bool operator==(const Reference&) const = default;
};

struct SignedInfo {
  std::string canonicalization_method{kCanonicalizationUri};
  crypto::AlgorithmId signature_method;
  std::vector<Reference> references;

  const Reference* find(std::string_view uri) const;

  bool operator==(const SignedInfo&) const = default;
};

// Either an opaque certificate (DER) or a bare public key
// (SubjectPublicKeyInfo DER). Exactly one is non-empty.
struct KeyInfo {
  Bytes certificate;
  Bytes public_key;

  static KeyInfo from_certificate(Bytes der);
  static KeyInfo from_public_key(Bytes spki);

  bool has_certificate() const { return !certificate.empty(); }
  // The key to verify with. Throws Errc::kMalformedKey for a certificate
  // whose public key cannot be read.
  Bytes verification_key() const;

  bool operator==(const KeyInfo&) const = default;
};

struct XmlSignature {
  SignedInfo signed_info;
  crypto::SignatureBytes signature_value;
  KeyInfo key_info;
  xml::XmlElement signed_properties;    // aida:signedProperties
  xml::XmlElement unsigned_properties;  // aida:unsignedProperties

  bool operator==(const XmlSignature&) const = default;
};

struct ReferenceResult {
  std::string target;
  bool digest_matches = false;

  bool operator==(const ReferenceResult&) const = default;
};

struct VerificationReport {
  // Overall verdict: SignatureValue checks out and every reference matches.
  bool signature_valid = false;
  // SignatureValue over the canonical SignedInfo, on its own.
  bool signature_value_valid = false;
  std::vector<ReferenceResult> reference_results;
  std::optional<std::string> failure_reason;

  const ReferenceResult* result_for(std::string_view target) const;
};

// Empty aida:signedProperties / aida:unsignedProperties elements.
xml::XmlElement empty_signed_properties();
xml::XmlElement empty_unsigned_properties();

// Where enveloped content lives in its host, and the bindings in scope at its
// parent there.
struct ContentTarget {
  std::string uri{kSignedContentUri};
  xml::NamespaceMap inherited_ns;
};

// Bytes to digest for one content reference.
struct ContentInput {
  std::string uri;
  Bytes bytes;
};

// Signs one or more content inputs plus the KeyInfo and signedProperties.
// An empty `certificate` puts the bare public key in KeyInfo. Property
// elements without a name are replaced by empty ones.
XmlSignature sign(const std::vector<ContentInput>& content,
                  const crypto::KeyPair& key, const Bytes& certificate,
                  xml::XmlElement signed_props, xml::XmlElement unsigned_props);

XmlSignature sign_enveloping(const xml::XmlElement& content,
                             const crypto::KeyPair& key, const Bytes& certificate,
                             xml::XmlElement signed_props,
                             xml::XmlElement unsigned_props,
                             const ContentTarget& target = {});

XmlSignature sign_detached(std::span<const std::uint8_t> blob,
                           const crypto::KeyPair& key, const Bytes& certificate,
                           xml::XmlElement signed_props,
                           xml::XmlElement unsigned_props,
                           const std::string& label = "blob");

// dsig:Signature element. Laid out for a signature placed one level below
// the document root.
xml::XmlElement emit(const XmlSignature& signature);

// Inverse of emit. Throws Errc::kMalformedSignature.
XmlSignature absorb(const xml::XmlElement& element);

// Canonical bytes of the emitted SignedInfo, the input to SignatureValue.
Bytes canonical_signed_info(const XmlSignature& signature);

// Canonical bytes of a node inside the emitted signature (a self reference).
// Throws Errc::kUnresolvableReference.
Bytes canonical_self_target(const XmlSignature& signature,
                            const xml::NodePath& path);

// Produces the bytes to digest for a content reference. Should throw
// Errc::kUnresolvableReference when the target does not exist.
using Resolver = std::function<Bytes(const Reference&)>;

// Checks the SignatureValue and every reference. Mismatches are reported,
// not thrown. Throws kMalformedKey, kUnknownAlgorithm or
// kUnresolvableReference.
VerificationReport verify_signature(const XmlSignature& signature,
                                    const Resolver& resolve);

// Resolver for content references into a host document.
Resolver document_resolver(const xml::XmlDocument& host);
// Resolver for detached references: label -> bytes.
Resolver blob_resolver(std::string label, Bytes blob);

}  // namespace sigdoc::dsig

#endif  // SIGDOC_DSIG_HPP_
