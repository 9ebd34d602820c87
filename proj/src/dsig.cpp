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

#include "sigdoc/dsig.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "sigdoc/error.hpp"

namespace sigdoc::dsig {

using xml::XmlElement;
using xml::XmlName;

namespace {

// Depth of dsig:Signature below the host root; fixes the emitted layout.
constexpr int kSignatureDepth = 1;
constexpr int kPropertiesDepth = kSignatureDepth + 3;

XmlName dsig_name(std::string_view local) {
  return XmlName{std::string(kDsigNamespace), "dsig", std::string(local)};
}

XmlName aida_name(std::string_view local) {
  return XmlName{std::string(kAidaNamespace), "aida", std::string(local)};
}

XmlElement dsig_element(std::string_view local) {
  return XmlElement(dsig_name(local));
}

XmlElement& add_algorithm(XmlElement& parent, std::string_view local,
                          const std::string& uri) {
  XmlElement& e = parent.add_child(dsig_element(local));
  e.set_attribute(XmlName{"", "", "Algorithm"}, uri);
  return e;
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(Errc::kMalformedSignature, what);
}

// Element children of `e`; text between them must be whitespace.
std::vector<const XmlElement*> element_children(const XmlElement& e) {
  if (e.has_significant_text()) {
    malformed("unexpected text inside '" + e.name.qualified() + "'");
  }
  return e.child_elements();
}

const XmlElement& expect(const XmlElement* e, std::string_view ns,
                         std::string_view local, const std::string& where) {
  if (e == nullptr || !e->name.same_as(ns, local)) {
    malformed("expected '" + std::string(local) + "' in " + where);
  }
  return *e;
}

std::string required_attribute(const XmlElement& e, std::string_view local) {
  auto v = e.attribute("", local);
  if (!v) {
    malformed("'" + e.name.qualified() + "' lacks attribute '" +
              std::string(local) + "'");
  }
  return *v;
}

// Base64 content, tolerating line breaks and surrounding whitespace.
Bytes decode_payload(const XmlElement& e) {
  if (!e.child_elements().empty()) {
    malformed("'" + e.name.qualified() + "' must hold only text");
  }
  std::string compact;
  for (char c : e.text()) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') compact.push_back(c);
  }
  try {
    return crypto::base64_decode(compact);
  } catch (const Error& err) {
    malformed("bad base64 in '" + e.name.qualified() + "': " + err.what());
  }
}

const crypto::AlgorithmInfo& algorithm_or_malformed(const std::string& uri,
                                                    crypto::AlgorithmKind kind) {
  try {
    return crypto::AlgorithmRegistry::instance().lookup(uri, kind);
  } catch (const Error& err) {
    malformed(err.what());
  }
}

Reference absorb_reference(const XmlElement& e) {
  Reference ref;
  ref.uri = required_attribute(e, "URI");
  const auto kids = element_children(e);
  std::size_t i = 0;
  if (i < kids.size() && kids[i]->name.same_as(kDsigNamespace, "Transforms")) {
    if (!kids[i]->child_elements().empty() || kids[i]->has_significant_text()) {
      malformed("Transforms are not supported (reference '" + ref.uri + "')");
    }
    ++i;
  }
  const XmlElement& method =
      expect(i < kids.size() ? kids[i] : nullptr, kDsigNamespace,
             "DigestMethod", "Reference");
  ++i;
  const auto& info = algorithm_or_malformed(
      required_attribute(method, "Algorithm"), crypto::AlgorithmKind::kDigest);
  ref.digest_method = info.id;
  const XmlElement& value =
      expect(i < kids.size() ? kids[i] : nullptr, kDsigNamespace, "DigestValue",
             "Reference");
  ++i;
  ref.digest_value = decode_payload(value);
  if (ref.digest_value.size() != info.digest_size) {
    malformed("digest length does not match algorithm for '" + ref.uri + "'");
  }
  if (i != kids.size()) malformed("unexpected content in Reference");
  if (ref.targets_node()) {
    try {
      (void)ref.path();
    } catch (const Error& err) {
      malformed(err.what());
    }
  }
  return ref;
}

KeyInfo absorb_key_info(const XmlElement& e) {
  const auto kids = element_children(e);
  if (kids.size() != 1) malformed("KeyInfo must hold exactly one key");
  const XmlElement& k = *kids[0];
  if (k.name.same_as(kDsigNamespace, "X509Data")) {
    const auto certs = element_children(k);
    if (certs.size() != 1) malformed("X509Data must hold one certificate");
    const XmlElement& cert =
        expect(certs[0], kDsigNamespace, "X509Certificate", "X509Data");
    Bytes der = decode_payload(cert);
    if (der.empty()) malformed("empty certificate");
    return KeyInfo::from_certificate(std::move(der));
  }
  if (k.name.same_as(kDsig11Namespace, "DEREncodedKeyValue")) {
    Bytes spki = decode_payload(k);
    if (spki.empty()) malformed("empty public key");
    return KeyInfo::from_public_key(std::move(spki));
  }
  malformed("unsupported KeyInfo content '" + k.name.qualified() + "'");
}

void check_properties_name(const XmlElement& e, std::string_view local) {
  if (!e.name.same_as(kAidaNamespace, local)) {
    throw Error(Errc::kInvalidArgument,
                "expected aida:" + std::string(local) + ", got '" +
                    e.name.qualified() + "'");
  }
}

XmlElement normalize_properties(XmlElement props, std::string_view local) {
  if (props.name.local.empty()) return XmlElement(aida_name(local));
  check_properties_name(props, local);
  xml::indent(props, kPropertiesDepth);
  return props;
}

}  // namespace

xml::NodePath Reference::path() const {
  if (!targets_node()) {
    throw Error(Errc::kInvalidArgument, "'" + uri + "' is a blob label");
  }
  return xml::NodePath::parse(uri);
}

bool Reference::is_self_reference() const {
  return uri == "#/dsig:Signature" || uri.starts_with("#/dsig:Signature/");
}

const Reference* SignedInfo::find(std::string_view uri) const {
  for (const auto& r : references) {
    if (r.uri == uri) return &r;
  }
  return nullptr;
}

KeyInfo KeyInfo::from_certificate(Bytes der) {
  if (der.empty()) throw Error(Errc::kInvalidArgument, "empty certificate");
  KeyInfo k;
  k.certificate = std::move(der);
  return k;
}

KeyInfo KeyInfo::from_public_key(Bytes spki) {
  if (spki.empty()) throw Error(Errc::kInvalidArgument, "empty public key");
  KeyInfo k;
  k.public_key = std::move(spki);
  return k;
}

Bytes KeyInfo::verification_key() const {
  if (has_certificate()) return crypto::certificate_public_key(certificate);
  if (public_key.empty()) throw Error(Errc::kMalformedKey, "KeyInfo is empty");
  return public_key;
}

const ReferenceResult* VerificationReport::result_for(
    std::string_view target) const {
  for (const auto& r : reference_results) {
    if (r.target == target) return &r;
  }
  return nullptr;
}

XmlElement empty_signed_properties() {
  return XmlElement(aida_name("signedProperties"));
}

XmlElement empty_unsigned_properties() {
  return XmlElement(aida_name("unsignedProperties"));
}

XmlElement emit(const XmlSignature& signature) {
  XmlElement sig = dsig_element("Signature");
  sig.declare_namespace("dsig", std::string(kDsigNamespace));

  XmlElement& si = sig.add_child(dsig_element("SignedInfo"));
  add_algorithm(si, "CanonicalizationMethod",
                signature.signed_info.canonicalization_method);
  add_algorithm(si, "SignatureMethod", signature.signed_info.signature_method.uri);
  for (const auto& ref : signature.signed_info.references) {
    XmlElement& r = si.add_child(dsig_element("Reference"));
    r.set_attribute(XmlName{"", "", "URI"}, ref.uri);
    add_algorithm(r, "DigestMethod", ref.digest_method.uri);
    r.add_child(dsig_element("DigestValue"))
        .add_text(crypto::base64_encode(ref.digest_value));
  }

  sig.add_child(dsig_element("SignatureValue"))
      .add_text(crypto::base64_encode(signature.signature_value.value));

  XmlElement& ki = sig.add_child(dsig_element("KeyInfo"));
  if (signature.key_info.has_certificate()) {
    ki.add_child(dsig_element("X509Data"))
        .add_child(dsig_element("X509Certificate"))
        .add_text(crypto::base64_encode(signature.key_info.certificate));
  } else {
    XmlElement& v = ki.add_child(
        XmlElement(XmlName{std::string(kDsig11Namespace), "dsig11",
                           "DEREncodedKeyValue"}));
    v.declare_namespace("dsig11", std::string(kDsig11Namespace));
    v.add_text(crypto::base64_encode(signature.key_info.public_key));
  }

  XmlElement& props =
      sig.add_child(dsig_element("Object")).add_child(XmlElement(aida_name("properties")));
  props.declare_namespace("aida", std::string(kAidaNamespace));
  // Placeholders keep indent() away from the verbatim property elements.
  props.add_child(XmlElement(aida_name("signedProperties")));
  props.add_child(XmlElement(aida_name("unsignedProperties")));
  xml::indent(sig, kSignatureDepth);

  XmlElement& object = *sig.child_elements().back();
  XmlElement& placed = *object.child_elements().front();
  auto slots = placed.child_elements();
  *slots[0] = signature.signed_properties;
  *slots[1] = signature.unsigned_properties;
  return sig;
}

XmlSignature absorb(const XmlElement& element) {
  if (!element.name.same_as(kDsigNamespace, "Signature")) {
    malformed("not a dsig:Signature element: '" + element.name.qualified() + "'");
  }
  const auto parts = element_children(element);
  auto part = [&](std::size_t i, std::string_view local) -> const XmlElement& {
    return expect(i < parts.size() ? parts[i] : nullptr, kDsigNamespace, local,
                  "Signature");
  };
  XmlSignature sig;

  const XmlElement& si = part(0, "SignedInfo");
  const auto si_kids = element_children(si);
  if (si_kids.size() < 3) malformed("SignedInfo is incomplete");
  const XmlElement& c14n = expect(si_kids[0], kDsigNamespace,
                                  "CanonicalizationMethod", "SignedInfo");
  sig.signed_info.canonicalization_method = required_attribute(c14n, "Algorithm");
  if (sig.signed_info.canonicalization_method != kCanonicalizationUri) {
    malformed("unsupported canonicalization '" +
              sig.signed_info.canonicalization_method + "'");
  }
  const XmlElement& method =
      expect(si_kids[1], kDsigNamespace, "SignatureMethod", "SignedInfo");
  sig.signed_info.signature_method =
      algorithm_or_malformed(required_attribute(method, "Algorithm"),
                             crypto::AlgorithmKind::kSignature)
          .id;
  std::set<std::string> seen;
  for (std::size_t i = 2; i < si_kids.size(); ++i) {
    Reference ref = absorb_reference(
        expect(si_kids[i], kDsigNamespace, "Reference", "SignedInfo"));
    if (!seen.insert(ref.uri).second) malformed("duplicate reference '" + ref.uri + "'");
    sig.signed_info.references.push_back(std::move(ref));
  }
  if (!seen.count(std::string(kKeyInfoUri))) malformed("no reference to KeyInfo");
  if (!seen.count(std::string(kSignedPropertiesUri))) {
    malformed("no reference to signedProperties");
  }
  if (seen.size() < 3) malformed("no content reference");

  sig.signature_value.algorithm = sig.signed_info.signature_method;
  sig.signature_value.value = decode_payload(part(1, "SignatureValue"));
  if (sig.signature_value.value.empty()) malformed("empty SignatureValue");

  sig.key_info = absorb_key_info(part(2, "KeyInfo"));

  const auto object_kids = element_children(part(3, "Object"));
  if (object_kids.size() != 1) malformed("Object must hold aida:properties");
  const XmlElement& props =
      expect(object_kids[0], kAidaNamespace, "properties", "Object");
  const auto prop_kids = element_children(props);
  if (prop_kids.size() != 2) {
    malformed("aida:properties must hold signed and unsigned properties");
  }
  sig.signed_properties =
      expect(prop_kids[0], kAidaNamespace, "signedProperties", "properties");
  sig.unsigned_properties =
      expect(prop_kids[1], kAidaNamespace, "unsignedProperties", "properties");
  if (parts.size() != 4) malformed("unexpected element after Object");
  return sig;
}

Bytes canonical_signed_info(const XmlSignature& signature) {
  const XmlElement sig = emit(signature);
  return xml::canonicalize(*sig.child_elements().front(),
                           xml::scope_of(sig, {}));
}

Bytes canonical_self_target(const XmlSignature& signature,
                            const xml::NodePath& path) {
  if (path.steps.empty() || path.steps.front().qualified() != "dsig:Signature") {
    throw Error(Errc::kUnresolvableReference,
                "'" + path.to_string() + "' is not inside the signature");
  }
  const XmlElement sig = emit(signature);
  xml::NodePath rest;
  rest.steps.assign(path.steps.begin() + 1, path.steps.end());
  try {
    const xml::Selection sel = xml::select_scoped(sig, {}, rest);
    return xml::canonicalize(*sel.element, sel.inherited_ns);
  } catch (const Error& err) {
    if (err.code() != Errc::kNodeNotFound) throw;
    throw Error(Errc::kUnresolvableReference, err.what());
  }
}

XmlSignature sign(const std::vector<ContentInput>& content,
                  const crypto::KeyPair& key, const Bytes& certificate,
                  XmlElement signed_props, XmlElement unsigned_props) {
  const auto& info = crypto::AlgorithmRegistry::instance().lookup(
      key.algorithm.uri, crypto::AlgorithmKind::kSignature);
  if (content.empty()) {
    throw Error(Errc::kInvalidArgument, "nothing to sign");
  }

  XmlSignature sig;
  sig.signed_info.signature_method = info.id;
  sig.signature_value.algorithm = info.id;
  if (certificate.empty()) {
    sig.key_info = KeyInfo::from_public_key(key.public_key);
  } else {
    if (crypto::certificate_public_key(certificate) != key.public_key) {
      throw Error(Errc::kKeyMismatch, "certificate does not carry the signing key");
    }
    sig.key_info = KeyInfo::from_certificate(certificate);
  }
  sig.signed_properties = normalize_properties(std::move(signed_props),
                                               "signedProperties");
  sig.unsigned_properties = normalize_properties(std::move(unsigned_props),
                                                 "unsignedProperties");

  std::set<std::string> seen;
  for (const auto& c : content) {
    Reference ref{c.uri, info.reference_digest, {}};
    if (c.uri.empty()) throw Error(Errc::kInvalidArgument, "empty reference target");
    if (ref.targets_node()) {
      (void)ref.path();
      if (ref.is_self_reference()) {
        throw Error(Errc::kInvalidArgument,
                    "content target inside the signature: '" + c.uri + "'");
      }
    }
    if (!seen.insert(c.uri).second) {
      throw Error(Errc::kInvalidArgument, "duplicate target '" + c.uri + "'");
    }
    ref.digest_value = crypto::digest(c.bytes, ref.digest_method).value;
    sig.signed_info.references.push_back(std::move(ref));
  }
  for (std::string_view self : {kKeyInfoUri, kSignedPropertiesUri}) {
    Reference ref{std::string(self), info.reference_digest, {}};
    ref.digest_value =
        crypto::digest(canonical_self_target(sig, ref.path()), ref.digest_method)
            .value;
    sig.signed_info.references.push_back(std::move(ref));
  }
  sig.signature_value =
      crypto::sign(key.private_key, canonical_signed_info(sig), info.id);
  return sig;
}

XmlSignature sign_enveloping(const XmlElement& content,
                             const crypto::KeyPair& key, const Bytes& certificate,
                             XmlElement signed_props, XmlElement unsigned_props,
                             const ContentTarget& target) {
  if (!target.uri.starts_with("#")) {
    throw Error(Errc::kInvalidArgument,
                "enveloping target must be a node path: '" + target.uri + "'");
  }
  return sign({ContentInput{target.uri,
                            xml::canonicalize(content, target.inherited_ns)}},
              key, certificate, std::move(signed_props),
              std::move(unsigned_props));
}

XmlSignature sign_detached(std::span<const std::uint8_t> blob,
                           const crypto::KeyPair& key, const Bytes& certificate,
                           XmlElement signed_props, XmlElement unsigned_props,
                           const std::string& label) {
  if (label.empty() || label.starts_with("#")) {
    throw Error(Errc::kInvalidArgument, "bad blob label '" + label + "'");
  }
  return sign({ContentInput{label, Bytes(blob.begin(), blob.end())}}, key,
              certificate, std::move(signed_props), std::move(unsigned_props));
}

VerificationReport verify_signature(const XmlSignature& signature,
                                    const Resolver& resolve) {
  VerificationReport report;
  const Bytes public_key = signature.key_info.verification_key();

  bool all_match = true;
  for (const auto& ref : signature.signed_info.references) {
    Bytes input = ref.is_self_reference()
                      ? canonical_self_target(signature, ref.path())
                      : resolve(ref);
    const bool ok =
        crypto::digest(input, ref.digest_method).value == ref.digest_value;
    report.reference_results.push_back({ref.uri, ok});
    if (!ok) {
      if (all_match) {
        report.failure_reason = "digest mismatch for reference '" + ref.uri + "'";
      }
      all_match = false;
    }
  }

  crypto::SignatureBytes value = signature.signature_value;
  value.algorithm = signature.signed_info.signature_method;
  report.signature_value_valid =
      crypto::verify(public_key, canonical_signed_info(signature), value);
  if (!report.signature_value_valid && !report.failure_reason) {
    report.failure_reason = "SignatureValue does not verify over SignedInfo";
  }
  report.signature_valid = report.signature_value_valid && all_match;
  return report;
}

Resolver document_resolver(const xml::XmlDocument& host) {
  return [&host](const Reference& ref) -> Bytes {
    if (!ref.targets_node()) {
      throw Error(Errc::kUnresolvableReference,
                  "blob reference '" + ref.uri + "' in an enveloping document");
    }
    try {
      const xml::Selection sel = xml::select_scoped(host.root, {}, ref.path());
      return xml::canonicalize(*sel.element, sel.inherited_ns);
    } catch (const Error& err) {
      if (err.code() != Errc::kNodeNotFound) throw;
      throw Error(Errc::kUnresolvableReference, err.what());
    }
  };
}

Resolver blob_resolver(std::string label, Bytes blob) {
  return [label = std::move(label), blob = std::move(blob)](const Reference& ref) {
    if (ref.uri != label) {
      throw Error(Errc::kUnresolvableReference, "unknown blob '" + ref.uri + "'");
    }
    return blob;
  };
}

}  // namespace sigdoc::dsig
