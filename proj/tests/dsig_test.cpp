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

#include <gtest/gtest.h>

#include <memory>
#include <string>

#include "random_xml.hpp"
#include "sigdoc/error.hpp"
#include "test_util.hpp"

namespace sigdoc::dsig {
namespace {

using sigdoc::testing::error_of;
using xml::XmlDocument;
using xml::XmlElement;
using xml::XmlName;

const std::string kAida(kAidaNamespace);

XmlName aida(const std::string& local) { return XmlName{kAida, "aida", local}; }

XmlElement sample_content() {
  const XmlDocument d = xml::parse(
      "<aida:signedContent xmlns:aida='http://www.polito.it'>"
      "<aida:documentTypeData><aida:documentTypeID>aida://www.polito.it/tax"
      "</aida:documentTypeID></aida:documentTypeData></aida:signedContent>");
  XmlElement e = d.root;
  e.namespace_declarations.clear();  // declared on the host root instead
  return e;
}

// <aida:eDocument> holding content and signatures, as a parsed document.
XmlDocument host(const XmlElement& content,
                 const std::vector<XmlSignature>& sigs) {
  XmlDocument doc;
  doc.root = XmlElement(aida("eDocument"));
  doc.root.declare_namespace("aida", kAida);
  // Layout whitespace only between root children; the content stays as
  // signed.
  doc.root.add_text("\n  ");
  doc.root.add_child(content);
  for (const auto& s : sigs) {
    doc.root.add_text("\n  ");
    doc.root.add_child(emit(s));
  }
  doc.root.add_text("\n");
  return xml::parse(xml::serialize(doc));
}

const XmlElement& signature_in(const XmlDocument& doc, std::size_t i = 0) {
  std::size_t n = 0;
  for (const XmlElement* e : doc.root.child_elements()) {
    if (e->name.same_as(kDsigNamespace, "Signature") && n++ == i) return *e;
  }
  throw std::out_of_range("signature");
}

ContentTarget host_target() {
  return ContentTarget{std::string(kSignedContentUri), {{"aida", kAida}}};
}

class DsigTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    crypto::SeededRandom random(7);
    key_ = std::make_unique<crypto::KeyPair>(
        crypto::generate_keypair(crypto::kRsaSha1, 1024, random));
    other_ = std::make_unique<crypto::KeyPair>(
        crypto::generate_keypair(crypto::kRsaSha1, 1024, random));
    cert_ = std::make_unique<Bytes>(
        crypto::make_self_signed_certificate(*key_, "Signer", random));
    other_cert_ = std::make_unique<Bytes>(
        crypto::make_self_signed_certificate(*other_, "Other", random));
  }
  static void TearDownTestSuite() {
    key_.reset();
    other_.reset();
    cert_.reset();
    other_cert_.reset();
  }

  static XmlSignature sign_sample(const XmlElement& content) {
    return sign_enveloping(content, *key_, *cert_, {}, {}, host_target());
  }

  static std::unique_ptr<crypto::KeyPair> key_;
  static std::unique_ptr<crypto::KeyPair> other_;
  static std::unique_ptr<Bytes> cert_;
  static std::unique_ptr<Bytes> other_cert_;
};

std::unique_ptr<crypto::KeyPair> DsigTest::key_;
std::unique_ptr<crypto::KeyPair> DsigTest::other_;
std::unique_ptr<Bytes> DsigTest::cert_;
std::unique_ptr<Bytes> DsigTest::other_cert_;

TEST_F(DsigTest, EnvelopingRoundTrip) {
  const XmlElement content = sample_content();
  const XmlSignature sig = sign_sample(content);
  ASSERT_EQ(sig.signed_info.references.size(), 3u);
  EXPECT_EQ(sig.signed_info.references[0].uri, kSignedContentUri);
  EXPECT_EQ(sig.signed_info.references[1].uri, kKeyInfoUri);
  EXPECT_EQ(sig.signed_info.references[2].uri, kSignedPropertiesUri);

  const XmlDocument doc = host(content, {sig});
  const XmlSignature back = absorb(signature_in(doc));
  EXPECT_EQ(back, sig);
  const VerificationReport r = verify_signature(back, document_resolver(doc));
  EXPECT_TRUE(r.signature_valid) << r.failure_reason.value_or("");
  EXPECT_TRUE(r.signature_value_valid);
  ASSERT_EQ(r.reference_results.size(), 3u);
  for (const auto& rr : r.reference_results) EXPECT_TRUE(rr.digest_matches);
  EXPECT_FALSE(r.failure_reason.has_value());
}

TEST_F(DsigTest, EmittedShape) {
  const XmlElement e = emit(sign_sample(sample_content()));
  EXPECT_EQ(e.name.qualified(), "dsig:Signature");
  EXPECT_EQ(e.name.namespace_uri, "http://www.w3.org/2000/09/xmldsig#");
  const auto parts = e.child_elements();
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts[0]->name.local, "SignedInfo");
  EXPECT_EQ(parts[1]->name.local, "SignatureValue");
  EXPECT_EQ(parts[2]->name.local, "KeyInfo");
  EXPECT_EQ(parts[3]->name.local, "Object");

  const auto si = parts[0]->child_elements();
  EXPECT_EQ(si[0]->attribute("", "Algorithm"),
            "http://www.w3.org/TR/2001/REC-xml-c14n-20010315");
  EXPECT_EQ(si[1]->attribute("", "Algorithm"),
            "http://www.w3.org/2000/09/xmldsig#rsa-sha1");
  EXPECT_EQ(si.size(), 5u);
  EXPECT_EQ(si[2]->child_elements()[0]->attribute("", "Algorithm"),
            "http://www.w3.org/2000/09/xmldsig#sha1");

  EXPECT_NE(parts[2]->child_elements()[0]->find_child(kDsigNamespace,
                                                      "X509Certificate"),
            nullptr);
  const XmlElement* props =
      parts[3]->find_child(kAidaNamespace, "properties");
  ASSERT_NE(props, nullptr);
  EXPECT_EQ(props->namespace_declarations.at("aida"), kAida);
  const auto pk = props->child_elements();
  ASSERT_EQ(pk.size(), 2u);
  EXPECT_EQ(pk[0]->name.qualified(), "aida:signedProperties");
  EXPECT_TRUE(pk[0]->children.empty());
  EXPECT_EQ(pk[1]->name.qualified(), "aida:unsignedProperties");
  EXPECT_TRUE(pk[1]->children.empty());
  // Empty properties serialize as empty elements.
  XmlDocument d{e, "UTF-8"};
  const std::string text = xml::serialize_to_string(d);
  EXPECT_NE(text.find("<aida:signedProperties/>"), std::string::npos);
  EXPECT_NE(text.find("<aida:unsignedProperties/>"), std::string::npos);
}

TEST_F(DsigTest, SignatureValueIsOverCanonicalSignedInfo) {
  const XmlElement content = sample_content();
  const XmlSignature sig = sign_sample(content);
  const XmlDocument doc = host(content, {sig});
  // Recompute from the serialized document, not from the value.
  const XmlElement& s = signature_in(doc);
  const XmlElement& si = *s.child_elements().front();
  const Bytes c14n = xml::canonicalize(si, xml::scope_of(s, {}));
  EXPECT_EQ(c14n, canonical_signed_info(sig));
  EXPECT_EQ(crypto::sign(key_->private_key, c14n, crypto::kRsaSha1),
            sig.signature_value);
  const std::string text(c14n.begin(), c14n.end());
  EXPECT_TRUE(text.starts_with(
      "<dsig:SignedInfo xmlns:dsig=\"http://www.w3.org/2000/09/xmldsig#\">"));
}

TEST_F(DsigTest, ContentTamperFlipsOnlyTheContentReference) {
  XmlElement content = sample_content();
  const XmlSignature sig = sign_sample(content);
  content.child_elements()[0]->child_elements()[0]->children[0] =
      std::string("aida://www.polito.it/other");
  const XmlDocument doc = host(content, {sig});
  const VerificationReport r =
      verify_signature(absorb(signature_in(doc)), document_resolver(doc));
  EXPECT_FALSE(r.signature_valid);
  EXPECT_TRUE(r.signature_value_valid);
  EXPECT_FALSE(r.result_for(kSignedContentUri)->digest_matches);
  EXPECT_TRUE(r.result_for(kKeyInfoUri)->digest_matches);
  EXPECT_TRUE(r.result_for(kSignedPropertiesUri)->digest_matches);
  ASSERT_TRUE(r.failure_reason.has_value());
  EXPECT_NE(r.failure_reason->find("aida:signedContent"), std::string::npos);
}

TEST_F(DsigTest, KeyInfoSwapIsDetected) {
  XmlSignature sig = sign_sample(sample_content());
  sig.key_info = KeyInfo::from_certificate(*other_cert_);
  const VerificationReport r =
      verify_signature(sig, document_resolver(host(sample_content(), {sig})));
  EXPECT_FALSE(r.signature_valid);
  EXPECT_FALSE(r.result_for(kKeyInfoUri)->digest_matches);
  EXPECT_TRUE(r.result_for(kSignedContentUri)->digest_matches);
}

TEST_F(DsigTest, SignedPropertiesAreCoveredUnsignedAreNot) {
  XmlElement sp = empty_signed_properties();
  sp.add_child(XmlElement(aida("transformDataID"))).add_text("taxTrafo1");
  XmlElement up = empty_unsigned_properties();
  up.add_child(XmlElement(aida("signatureValueTimeStamp"))).add_text("AAAA");
  const XmlElement content = sample_content();
  const XmlSignature sig =
      sign_enveloping(content, *key_, *cert_, sp, up, host_target());

  XmlSignature unsigned_changed = sig;
  unsigned_changed.unsigned_properties.child_elements()[0]->children[0] =
      std::string("BBBB");
  XmlDocument doc = host(content, {unsigned_changed});
  VerificationReport r =
      verify_signature(absorb(signature_in(doc)), document_resolver(doc));
  EXPECT_TRUE(r.signature_valid);

  XmlSignature signed_changed = sig;
  signed_changed.signed_properties.child_elements()[0]->children[0] =
      std::string("taxTrafo2");
  doc = host(content, {signed_changed});
  r = verify_signature(absorb(signature_in(doc)), document_resolver(doc));
  EXPECT_FALSE(r.signature_valid);
  EXPECT_FALSE(r.result_for(kSignedPropertiesUri)->digest_matches);
  EXPECT_TRUE(r.result_for(kSignedContentUri)->digest_matches);
  EXPECT_TRUE(r.result_for(kKeyInfoUri)->digest_matches);
}

TEST_F(DsigTest, ParallelSignaturesVerifyIndependently) {
  const XmlElement content = sample_content();
  const XmlSignature a = sign_sample(content);
  const XmlSignature b =
      sign_enveloping(content, *other_, *other_cert_, {}, {}, host_target());
  const XmlDocument doc = host(content, {a, b});
  for (std::size_t i = 0; i < 2; ++i) {
    const VerificationReport r =
        verify_signature(absorb(signature_in(doc, i)), document_resolver(doc));
    EXPECT_TRUE(r.signature_valid) << i;
  }
}

TEST_F(DsigTest, BarePublicKey) {
  const XmlElement content = sample_content();
  const XmlSignature sig =
      sign_enveloping(content, *key_, Bytes{}, {}, {}, host_target());
  EXPECT_FALSE(sig.key_info.has_certificate());
  EXPECT_EQ(sig.key_info.public_key, key_->public_key);
  const XmlDocument doc = host(content, {sig});
  const XmlSignature back = absorb(signature_in(doc));
  EXPECT_EQ(back, sig);
  EXPECT_TRUE(verify_signature(back, document_resolver(doc)).signature_valid);
}

TEST_F(DsigTest, Ed25519) {
  crypto::SeededRandom random(3);
  const crypto::KeyPair ed =
      crypto::generate_keypair(crypto::kEd25519, 0, random);
  const XmlElement content = sample_content();
  const XmlSignature sig =
      sign_enveloping(content, ed, Bytes{}, {}, {}, host_target());
  EXPECT_EQ(sig.signed_info.references[0].digest_method, crypto::kSha256);
  const XmlDocument doc = host(content, {sig});
  EXPECT_TRUE(verify_signature(absorb(signature_in(doc)), document_resolver(doc))
                  .signature_valid);
}

TEST_F(DsigTest, CertificateMustCarryTheSigningKey) {
  EXPECT_EQ(error_of([&] {
              sign_enveloping(sample_content(), *key_, *other_cert_, {}, {},
                              host_target());
            }),
            Errc::kKeyMismatch);
}

TEST_F(DsigTest, Detached) {
  const Bytes blob = {'f', 'i', 'l', 'e', '\n'};
  const XmlSignature sig = sign_detached(blob, *key_, *cert_, {}, {}, "report.txt");
  EXPECT_EQ(sig.signed_info.references[0].uri, "report.txt");
  EXPECT_TRUE(verify_signature(sig, blob_resolver("report.txt", blob)).signature_valid);

  const Bytes other = {'f', 'i', 'l', 'e'};
  const VerificationReport r =
      verify_signature(sig, blob_resolver("report.txt", other));
  EXPECT_FALSE(r.signature_valid);
  EXPECT_FALSE(r.result_for("report.txt")->digest_matches);
  EXPECT_TRUE(r.result_for(kKeyInfoUri)->digest_matches);

  EXPECT_EQ(absorb(emit(sig)), sig);
}

TEST_F(DsigTest, DetachedEmptyBlob) {
  const XmlSignature sig = sign_detached(Bytes{}, *key_, *cert_, {}, {});
  EXPECT_EQ(crypto::to_hex(sig.signed_info.references[0].digest_value),
            "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  EXPECT_TRUE(verify_signature(sig, blob_resolver("blob", {})).signature_valid);
}

TEST_F(DsigTest, UnresolvableReference) {
  const XmlSignature sig = sign_sample(sample_content());
  XmlDocument empty;
  empty.root = XmlElement(aida("eDocument"));
  EXPECT_EQ(error_of([&] { verify_signature(sig, document_resolver(empty)); }),
            Errc::kUnresolvableReference);
  EXPECT_EQ(error_of([&] {
              verify_signature(sign_detached(Bytes{}, *key_, *cert_, {}, {}),
                               blob_resolver("other", {}));
            }),
            Errc::kUnresolvableReference);
}

TEST_F(DsigTest, BadLabelsAndTargets) {
  EXPECT_EQ(error_of([&] { sign_detached(Bytes{}, *key_, *cert_, {}, {}, "#x"); }),
            Errc::kInvalidArgument);
  EXPECT_EQ(error_of([&] {
              sign_enveloping(sample_content(), *key_, *cert_, {}, {},
                              ContentTarget{"#/dsig:Signature", {}});
            }),
            Errc::kInvalidArgument);
  EXPECT_EQ(error_of([&] {
              sign_enveloping(sample_content(), *key_, *cert_,
                              XmlElement(aida("wrong")), {}, host_target());
            }),
            Errc::kInvalidArgument);
}

// Absorb failure modes, each produced by editing an emitted element.

class AbsorbTest : public DsigTest {
 protected:
  void SetUp() override { element_ = emit(sign_sample(sample_content())); }

  XmlElement& part(std::size_t i) { return *element_.child_elements()[i]; }
  XmlElement& first_reference() { return *part(0).child_elements()[2]; }

  Errc absorb_error() {
    return error_of([&] { absorb(element_); });
  }

  XmlElement element_;
};

TEST_F(AbsorbTest, MissingSignatureValue) {
  auto& kids = element_.children;
  kids.erase(std::find_if(kids.begin(), kids.end(), [](const xml::XmlNode& n) {
    return n.is_element() && n.element().name.local == "SignatureValue";
  }));
  EXPECT_EQ(absorb_error(), Errc::kMalformedSignature);
}

TEST_F(AbsorbTest, IllegalBase64InDigest) {
  first_reference().child_elements()[1]->children = {std::string("@@@@")};
  EXPECT_EQ(absorb_error(), Errc::kMalformedSignature);
}

TEST_F(AbsorbTest, WrongDigestLength) {
  first_reference().child_elements()[1]->children = {std::string("AAAA")};
  EXPECT_EQ(absorb_error(), Errc::kMalformedSignature);
}

TEST_F(AbsorbTest, UnknownAlgorithm) {
  part(0).child_elements()[1]->attributes[0].value = "urn:unknown";
  EXPECT_EQ(absorb_error(), Errc::kMalformedSignature);
}

TEST_F(AbsorbTest, NonEmptyTransforms) {
  XmlElement t(XmlName{std::string(kDsigNamespace), "dsig", "Transforms"});
  XmlElement empty = t;
  t.add_child(XmlElement(XmlName{std::string(kDsigNamespace), "dsig", "Transform"}));
  auto& ch = first_reference().children;
  ch.insert(ch.begin(), empty);
  EXPECT_NO_THROW(absorb(element_));
  ch.front() = t;
  EXPECT_EQ(absorb_error(), Errc::kMalformedSignature);
}

TEST_F(AbsorbTest, MissingKeyInfoReference) {
  auto& si = part(0).children;
  si.erase(std::find_if(si.begin(), si.end(), [](const xml::XmlNode& n) {
    return n.is_element() &&
           n.element().attribute("", "URI") == std::string(kKeyInfoUri);
  }));
  EXPECT_EQ(absorb_error(), Errc::kMalformedSignature);
}

TEST_F(AbsorbTest, NotASignature) {
  element_.name.local = "Signatur";
  EXPECT_EQ(absorb_error(), Errc::kMalformedSignature);
}

TEST_F(AbsorbTest, WrongCanonicalization) {
  part(0).child_elements()[0]->attributes[0].value = "urn:other-c14n";
  EXPECT_EQ(absorb_error(), Errc::kMalformedSignature);
}

// Random content: signing always verifies, and one mutation flips only the
// content reference.
TEST_F(DsigTest, RandomContentProperty) {
  testing::RandomXml gen(11);
  for (int i = 0; i < 40; ++i) {
    XmlElement content(aida("signedContent"));
    content.add_child(gen.document().root);
    const XmlSignature sig = sign_sample(content);
    XmlDocument doc = host(content, {sig});
    const XmlSignature back = absorb(signature_in(doc));
    ASSERT_TRUE(verify_signature(back, document_resolver(doc)).signature_valid);

    std::vector<XmlElement*> all;
    testing::collect(*doc.root.child_elements()[0], all);
    XmlElement* target = all[gen.uniform(1, all.size() - 1)];
    target->set_attribute(XmlName{"", "", "mutated"}, "1");
    const VerificationReport r = verify_signature(back, document_resolver(doc));
    ASSERT_FALSE(r.signature_valid);
    ASSERT_FALSE(r.result_for(kSignedContentUri)->digest_matches);
    ASSERT_TRUE(r.result_for(kKeyInfoUri)->digest_matches);
    ASSERT_TRUE(r.result_for(kSignedPropertiesUri)->digest_matches);
  }
}

}  // namespace
}  // namespace sigdoc::dsig
