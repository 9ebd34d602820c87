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

#include "sigdoc/edoc.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>

#include "sigdoc/error.hpp"
#include "tax_world.hpp"
#include "test_util.hpp"

namespace sigdoc::edoc {
namespace {

using sigdoc::testing::error_of;
using sigdoc::testing::kTaxNamespace;
using sigdoc::testing::read_fixture;
using sigdoc::testing::TaxWorld;
using xml::XmlElement;
using xml::XmlName;

const TaxWorld& world() { return TaxWorld::get(); }

EDocument reparse(const EDocument& e) {
  return parse_edoc(xml::parse(xml::serialize(emit_edoc(e))));
}

XmlElement one_element() {
  return xml::parse("<aida:note xmlns:aida='http://www.polito.it'>hi</aida:note>").root;
}

// Edits the serialized envelope and parses it again.
EDocument edited(const EDocument& e, const std::string& from, const std::string& to) {
  std::string text = xml::serialize_to_string(emit_edoc(e));
  const auto at = text.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  text.replace(at, from.size(), to);
  return parse_edoc(xml::parse(text));
}

class MapLookup : public DefinitionLookup {
 public:
  void add(const std::string& ns, EDocument e) { entries_.emplace(ns, std::move(e)); }
  EDocument find_definition_by_namespace(const std::string& ns) const override {
    auto it = entries_.find(ns);
    if (it == entries_.end()) throw Error(Errc::kNotFound, "no definition for " + ns);
    return it->second;
  }

 private:
  std::map<std::string, EDocument> entries_;
};

MapLookup tax_lookup(EDocument definition = world().definition_edoc) {
  MapLookup l;
  l.add(kTaxNamespace, std::move(definition));
  return l;
}

std::vector<StepOutcome> outcomes(const PipelineReport& r) {
  std::vector<StepOutcome> out;
  for (const auto& s : r.steps) out.push_back(s.outcome);
  return out;
}

constexpr StepOutcome kP = StepOutcome::kPass;
constexpr StepOutcome kF = StepOutcome::kFail;
constexpr StepOutcome kS = StepOutcome::kSkipped;

TEST(EnvelopeTest, DefinitionShape) {
  const EDocument& e = world().definition_edoc;
  const xml::XmlDocument doc = emit_edoc(e);
  EXPECT_TRUE(doc.root.name.same_as("http://www.polito.it", "eDocument"));
  const auto kids = doc.root.child_elements();
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(kids[0]->name.local, "signedContent");
  EXPECT_EQ(kids[1]->name.qualified(), "dsig:Signature");
  EXPECT_EQ(e.payload().name.local, "documentTypeData");
  ASSERT_EQ(e.signatures[0].signed_info.references.size(), 3u);
  const std::string text = xml::serialize_to_string(doc);
  EXPECT_NE(text.find("<aida:signedProperties/>"), std::string::npos);
  EXPECT_NE(text.find("<aida:unsignedProperties/>"), std::string::npos);
  EXPECT_NE(text.find("xsi:schemaLocation=\"http://www.polito.it aida:eDocument\""),
            std::string::npos);
  EXPECT_TRUE(all_valid(verify_edoc(e)));
}

TEST(EnvelopeTest, RoundTrip) {
  for (const EDocument* e : {&world().definition_edoc, &world().transform_edoc,
                             &world().instance_edoc}) {
    const EDocument back = reparse(*e);
    EXPECT_EQ(back, *e);
    EXPECT_EQ(xml::serialize(emit_edoc(back)), xml::serialize(emit_edoc(*e)));
    EXPECT_TRUE(all_valid(verify_edoc(back)));
  }
}

TEST(EnvelopeTest, SmallContent) {
  const EDocument e =
      wrap_and_sign(one_element(), world().user_key, world().user_cert, {}, {});
  EXPECT_TRUE(all_valid(verify_edoc(e)));
  EXPECT_TRUE(all_valid(verify_edoc(reparse(e))));
}

TEST(EnvelopeTest, Malformed) {
  const EDocument& e = world().instance_edoc;
  std::string text = xml::serialize_to_string(emit_edoc(e));
  const auto sc = text.find("<aida:signedContent>");
  const auto sc_end = text.find("</aida:signedContent>") + 21;
  const auto sig_end = text.find("</dsig:Signature>") + 17;
  std::string swapped = text.substr(0, sc) + text.substr(sc_end, sig_end - sc_end) +
                        text.substr(sc, sc_end - sc) + text.substr(sig_end);
  EXPECT_EQ(error_of([&] { parse_edoc(xml::parse(swapped)); }), Errc::kMalformedEDocument);

  std::string unsigned_doc = text.substr(0, text.find("<dsig:Signature")) + "</aida:eDocument>";
  EXPECT_EQ(error_of([&] { parse_edoc(xml::parse(unsigned_doc)); }),
            Errc::kMalformedEDocument);
  EXPECT_EQ(error_of([] { parse_edoc(xml::parse("<aida:x xmlns:aida='http://www.polito.it'/>")); }),
            Errc::kMalformedEDocument);
  EXPECT_EQ(error_of([&] { edited(e, "<aida:eDocument ", "<aida:eDocument xmlns:q='urn:q' "); }),
            Errc::kMalformedEDocument);
  EXPECT_EQ(error_of([&] { edited(e, "</aida:signedContent>", "<aida:x/></aida:signedContent>"); }),
            Errc::kMalformedEDocument);
  EXPECT_EQ(error_of([&] { edited(e, "</aida:eDocument>", "<aida:extra/></aida:eDocument>"); }),
            Errc::kMalformedEDocument);

  EDocument none = e;
  none.signatures.clear();
  EXPECT_EQ(error_of([&] { emit_edoc(none); }), Errc::kMalformedEDocument);
}

TEST(EnvelopeTest, TamperedContentInvalidates) {
  const EDocument bad = edited(world().instance_edoc, ">Popescu<", ">Popescv<");
  const auto reports = verify_edoc(bad);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_FALSE(reports[0].signature_valid);
  EXPECT_FALSE(reports[0].result_for(std::string(dsig::kSignedContentUri))->digest_matches);
}

TEST(EnvelopeTest, UnsignedPropertiesAreFree) {
  UnsignedProperties up;
  up.signature_value_timestamp = Bytes{0x30, 0x03, 0x02, 0x01, 0x00};
  const EDocument stamped = with_unsigned_properties(world().instance_edoc, 0, up);
  EXPECT_TRUE(all_valid(verify_edoc(stamped)));
  const EDocument back = reparse(stamped);
  EXPECT_EQ(unsigned_properties_of(back.signatures[0]), up);
  EXPECT_TRUE(all_valid(verify_edoc(back)));
  EXPECT_EQ(error_of([&] { with_unsigned_properties(stamped, 3, up); }),
            Errc::kInvalidArgument);
}

TEST(EnvelopeTest, InstanceProperties) {
  const EDocument& e = world().instance_edoc;
  const SignedProperties sp = signed_properties_of(e.signatures[0]);
  EXPECT_EQ(sp.transform_data_id, "taxTrafo1");
  ASSERT_TRUE(sp.document_hash.has_value());
  EXPECT_EQ(sp.document_hash->algorithm, crypto::kSha1);
  EXPECT_EQ(sp.document_hash->value,
            e.signatures[0].signed_info.find(dsig::kSignedContentUri)->digest_value);
  EXPECT_EQ(signed_properties_of(reparse(e).signatures[0]), sp);
}

TEST(EnvelopeTest, WrongDocumentHashFails) {
  SignedProperties sp;
  sp.document_hash = crypto::digest("something else", crypto::kSha1);
  const EDocument e =
      wrap_and_sign(one_element(), world().user_key, world().user_cert, sp, {});
  const auto reports = verify_edoc(e);
  EXPECT_TRUE(reports[0].signature_value_valid);
  EXPECT_FALSE(reports[0].signature_valid);
  EXPECT_NE(reports[0].failure_reason->find("documentHash"), std::string::npos);
}

TEST(EnvelopeTest, UnknownPropertiesRoundTrip) {
  SignedProperties sp;
  sp.transform_data_id = "t";
  sp.other.push_back(one_element());
  const EDocument e =
      wrap_and_sign(one_element(), world().user_key, world().user_cert, sp, {});
  const SignedProperties back = signed_properties_of(reparse(e).signatures[0]);
  ASSERT_EQ(back.other.size(), 1u);
  EXPECT_EQ(back.other[0].name.local, "note");
  EXPECT_EQ(back.other[0].text(), "hi");
  EXPECT_EQ(back.transform_data_id, "t");
}

TEST(CountersignTest, ParallelSignatures) {
  const EDocument two = countersign(world().instance_edoc, world().designer_key,
                                    world().designer_cert, {}, {});
  ASSERT_EQ(two.signatures.size(), 2u);
  EXPECT_EQ(two.signatures[0], world().instance_edoc.signatures[0]);
  const auto reports = verify_edoc(two);
  EXPECT_TRUE(all_valid(reports));
  EXPECT_TRUE(all_valid(verify_edoc(reparse(two))));

  const auto bad = verify_edoc(edited(two, ">Ion<", ">Ioan<"));
  ASSERT_EQ(bad.size(), 2u);
  EXPECT_FALSE(bad[0].signature_valid);
  EXPECT_FALSE(bad[1].signature_valid);

  EDocument reversed = two;
  std::reverse(reversed.signatures.begin(), reversed.signatures.end());
  const auto rr = verify_edoc(reversed);
  EXPECT_EQ(rr[0].signature_valid, reports[1].signature_valid);
  EXPECT_EQ(rr[0].reference_results, reports[1].reference_results);
  EXPECT_EQ(rr[1].reference_results, reports[0].reference_results);
}

TEST(CountersignTest, BrokenCountersignatureLeavesOthersValid) {
  EDocument two = countersign(world().definition_edoc, world().user_key,
                              world().user_cert, {}, {});
  two.signatures[1].signature_value.value[5] ^= 0x20;
  const auto reports = verify_edoc(two);
  EXPECT_TRUE(reports[0].signature_valid);
  EXPECT_FALSE(reports[1].signature_valid);
  EXPECT_FALSE(all_valid(reports));
}

TEST(InstanceTest, TaxValues) {
  const XmlElement inst = make_instance(world().definition, world().values);
  const XmlElement fixture = xml::parse(read_fixture("tax_instance.xml")).root;
  EXPECT_EQ(inst, fixture);
  EXPECT_EQ(world().instance_edoc.payload().child_elements().size(), 9u);
}

TEST(InstanceTest, Errors) {
  auto values = world().values;
  values.erase("Surname");
  EXPECT_EQ(error_of([&] { make_instance(world().definition, values); }),
            Errc::kMissingField);
  values = world().values;
  values["Nickname"] = "x";
  EXPECT_EQ(error_of([&] { make_instance(world().definition, values); }),
            Errc::kUnknownField);
  values = world().values;
  values["Surname"] = std::string(21, 'P');
  try {
    make_instance(world().definition, values);
    ADD_FAILURE() << "accepted a 21 character surname";
  } catch (const ValueRejected& e) {
    EXPECT_EQ(e.code(), Errc::kValueRejected);
    EXPECT_TRUE(e.report().has("length", "Surname"));
  }
  values["Surname"] = std::string(20, 'P');
  EXPECT_NO_THROW(make_instance(world().definition, values));
}

TEST(InstanceTest, FieldValuesFormat) {
  const auto v = parse_field_values("a=1\r\n\nb=x=y\nc=\n");
  EXPECT_EQ(v.at("a"), "1");
  EXPECT_EQ(v.at("b"), "x=y");
  EXPECT_EQ(v.at("c"), "");
  EXPECT_EQ(error_of([] { parse_field_values("a=1\na=2\n"); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_of([] { parse_field_values("novalue\n"); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_of([] { parse_field_values("=v\n"); }), Errc::kInvalidArgument);
}

TEST(PipelineTest, FullChainPasses) {
  const PipelineReport r = pipeline_verify(world().instance_edoc, tax_lookup());
  EXPECT_TRUE(r.overall) << r.to_text();
  EXPECT_EQ(outcomes(r), (std::vector<StepOutcome>{kP, kP, kP, kP}));
  EXPECT_EQ(r.steps[0].name, "fetch-definition");
  EXPECT_EQ(r.steps[3].name, "verify-instance-signature");
  EXPECT_NE(r.to_text().find("validate-structure PASS"), std::string::npos);
}

TEST(PipelineTest, UnknownType) {
  MapLookup empty;
  const PipelineReport r = pipeline_verify(world().instance_edoc, empty);
  EXPECT_FALSE(r.overall);
  EXPECT_EQ(outcomes(r), (std::vector<StepOutcome>{kF, kS, kS, kS}));
}

TEST(PipelineTest, CorruptDefinitionSignature) {
  EDocument def = world().definition_edoc;
  def.signatures[0].signature_value.value[0] ^= 0x01;
  const PipelineReport r = pipeline_verify(world().instance_edoc, tax_lookup(def));
  EXPECT_FALSE(r.overall);
  EXPECT_EQ(outcomes(r), (std::vector<StepOutcome>{kP, kF, kS, kS}));
}

TEST(PipelineTest, TamperedDefinitionContent) {
  const EDocument def =
      edited(world().definition_edoc, "<xsd:maxLength value=\"20\"/>",
             "<xsd:maxLength value=\"5\"/>");
  const PipelineReport r = pipeline_verify(world().instance_edoc, tax_lookup(def));
  EXPECT_EQ(outcomes(r), (std::vector<StepOutcome>{kP, kF, kS, kS}));
}

TEST(PipelineTest, ReorderedFields) {
  XmlElement payload = world().instance_edoc.payload();
  auto& ch = payload.children;
  auto is = [](const std::string& local) {
    return [local](const xml::XmlNode& n) {
      return n.is_element() && n.element().name.local == local;
    };
  };
  std::iter_swap(std::find_if(ch.begin(), ch.end(), is("Surname")),
                 std::find_if(ch.begin(), ch.end(), is("Name")));
  // Properly signed, structurally wrong.
  const EDocument inst = sign_instance(payload, world().user_key, world().user_cert,
                                       std::string("taxTrafo1"));
  const PipelineReport r = pipeline_verify(inst, tax_lookup());
  EXPECT_EQ(outcomes(r), (std::vector<StepOutcome>{kP, kP, kF, kS}));
  EXPECT_NE(r.steps[2].detail.find("field order"), std::string::npos);
}

TEST(PipelineTest, CorruptInstanceSignature) {
  EDocument inst = world().instance_edoc;
  inst.signatures[0].signature_value.value[9] ^= 0x80;
  const PipelineReport r = pipeline_verify(inst, tax_lookup());
  EXPECT_EQ(outcomes(r), (std::vector<StepOutcome>{kP, kP, kP, kF}));
}

TEST(PipelineTest, TamperedInstanceValue) {
  const EDocument inst = edited(world().instance_edoc, ">D12876<", ">D12877<");
  const PipelineReport r = pipeline_verify(inst, tax_lookup());
  EXPECT_EQ(outcomes(r), (std::vector<StepOutcome>{kP, kP, kP, kF}));
}

// Any accepted value set goes through the whole chain.
TEST(PipelinePropertyTest, AcceptedValuesVerify) {
  std::mt19937 rng(3);
  const auto lookup = tax_lookup();
  const std::string alphabet = "abcXYZ019 ,.@+-\xC3\xA9";
  for (int round = 0; round < 25; ++round) {
    std::map<std::string, std::string> values;
    for (const auto& f : world().definition.schema().fields) {
      const int max = *f.type.effective_max();
      std::string v;
      const int n = static_cast<int>(rng() % (max + 1));
      for (int i = 0; i < n; ++i) {
        const char c = alphabet[rng() % (alphabet.size() - 2)];
        v += c;
      }
      if (rng() % 4 == 0 && n >= 1) {
        v.pop_back();
        v += "\xC3\xA9";  // still one character
      }
      values[f.name] = v;
    }
    const EDocument inst =
        sign_instance(make_instance(world().definition, values, 2), world().user_key,
                      world().user_cert, std::string("taxTrafo1"));
    const PipelineReport r = pipeline_verify(reparse(inst), lookup);
    ASSERT_TRUE(r.overall) << r.to_text();
  }
}

}  // namespace
}  // namespace sigdoc::edoc
