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

#include "sigdoc/xml.hpp"

#include <gtest/gtest.h>

#include <string>

#include "random_xml.hpp"
#include "sigdoc/error.hpp"
#include "test_util.hpp"

namespace sigdoc::xml {
namespace {

using sigdoc::testing::error_of;
using sigdoc::testing::read_fixture;

std::string canon(const XmlElement& e, const NamespaceMap& ns = {}) {
  const Bytes b = canonicalize(e, ns);
  return std::string(b.begin(), b.end());
}

TEST(XmlParseTest, SmallestNesting) {
  const XmlDocument doc = parse("<a><b>x</b></a>");
  EXPECT_EQ(doc.root.name.local, "a");
  ASSERT_EQ(doc.root.children.size(), 1u);
  const XmlElement& b = doc.root.children[0].element();
  EXPECT_EQ(b.name.local, "b");
  EXPECT_EQ(b.text(), "x");
}

TEST(XmlParseTest, GenericDefinitionFixture) {
  const XmlDocument doc = parse(read_fixture("tax_generic.xml"));
  EXPECT_EQ(doc.root.name.local, "genericSchema");
  EXPECT_EQ(doc.root.name.prefix, "aida");
  EXPECT_EQ(doc.root.name.namespace_uri, "http://aida.infonova.at");
  // Inter-element whitespace stays as text nodes.
  ASSERT_FALSE(doc.root.children.empty());
  EXPECT_TRUE(doc.root.children.front().is_text());
}

TEST(XmlParseTest, Errors) {
  EXPECT_EQ(error_of([] { parse("<a><b></a>"); }), Errc::kMalformedXml);
  EXPECT_EQ(error_of([] { parse("<a x='1' x='2'/>"); }), Errc::kMalformedXml);
  EXPECT_EQ(error_of([] { parse("<a xmlns:p='u' p:x='1' xmlns:q='u' q:x='2'/>"); }),
            Errc::kMalformedXml);
  EXPECT_EQ(error_of([] { parse("<p:a/>"); }), Errc::kMalformedXml);
  EXPECT_EQ(error_of([] { parse(std::string("<a>\x01</a>")); }), Errc::kMalformedXml);
  EXPECT_EQ(error_of([] { parse("<a>\xFF</a>"); }), Errc::kMalformedXml);
  EXPECT_EQ(error_of([] { parse("<a/><b/>"); }), Errc::kMalformedXml);
  EXPECT_EQ(error_of([] { parse("<a>&#0;</a>"); }), Errc::kMalformedXml);
  EXPECT_EQ(error_of([] { parse("<a>]]></a>"); }), Errc::kMalformedXml);
  EXPECT_EQ(error_of([] { parse(""); }), Errc::kMalformedXml);
}

TEST(XmlParseTest, RejectsUnsupportedConstructs) {
  EXPECT_EQ(error_of([] { parse("<!DOCTYPE a><a/>"); }), Errc::kUnsupportedConstruct);
  EXPECT_EQ(error_of([] { parse("<a><![CDATA[x]]></a>"); }), Errc::kUnsupportedConstruct);
  EXPECT_EQ(error_of([] { parse("<a><!-- c --></a>"); }), Errc::kUnsupportedConstruct);
  EXPECT_EQ(error_of([] { parse("<?pi x?><a/>"); }), Errc::kUnsupportedConstruct);
  EXPECT_EQ(error_of([] { parse("<a>&nbsp;</a>"); }), Errc::kUnsupportedConstruct);
}

TEST(XmlParseTest, Encoding) {
  EXPECT_NO_THROW(parse("<?xml version=\"1.0\" encoding=\"utf-8\"?><a/>"));
  EXPECT_NO_THROW(parse("\xEF\xBB\xBF<a/>"));
  EXPECT_EQ(error_of([] { parse("<?xml version=\"1.0\" encoding=\"ISO-8859-1\"?><a/>"); }),
            Errc::kUnsupportedEncoding);
}

TEST(XmlParseTest, ReferencesAndLineEnds) {
  const XmlDocument doc = parse("<a v='&#x41;&lt;'>1&amp;2\r\n3\r4&#13;</a>");
  EXPECT_EQ(doc.root.attribute("", "v"), "A<");
  EXPECT_EQ(doc.root.text(), "1&2\n3\n4\r");
}

TEST(XmlSerializeTest, TextAndEscaping) {
  XmlDocument doc;
  doc.root.name.local = "a";
  doc.root.add_text("x");
  EXPECT_NE(serialize_to_string(doc).find("<a>x</a>"), std::string::npos);

  XmlDocument amp;
  amp.root.name.local = "a";
  amp.root.set_attribute(XmlName{"", "", "v"}, "1&2");
  EXPECT_NE(serialize_to_string(amp).find("v=\"1&amp;2\""), std::string::npos);
}

TEST(XmlSerializeTest, RejectsUnboundPrefix) {
  XmlDocument doc;
  doc.root.name = XmlName{"urn:x", "p", "a"};
  EXPECT_EQ(error_of([&] { serialize(doc); }), Errc::kInvalidArgument);
  doc.root.declare_namespace("p", "urn:x");
  EXPECT_NO_THROW(serialize(doc));
}

TEST(XmlSerializeTest, InstanceFixtureRoundTrips) {
  const XmlDocument doc = parse(read_fixture("tax_instance.xml"));
  EXPECT_EQ(parse(serialize(doc)), doc);
}

TEST(XmlCanonicalTest, SortsAttributesAndExpandsEmptyElements) {
  EXPECT_EQ(canon(parse("<a b=\"2\" a=\"1\"/>").root), "<a a=\"1\" b=\"2\"></a>");
}

TEST(XmlCanonicalTest, GoldenFile) {
  const XmlDocument doc = parse(read_fixture("c14n_input.xml"));
  EXPECT_EQ(canon(doc.root), read_fixture("c14n_expected.txt"));
}

TEST(XmlCanonicalTest, AttributeOrderDoesNotMatter) {
  EXPECT_EQ(canon(parse("<a z='1' y='2' xmlns:p='u' p:k='3'/>").root),
            canon(parse("<a p:k='3' xmlns:p='u' y='2' z='1'/>").root));
}

TEST(XmlCanonicalTest, InheritedNamespacesAppearAtTheApex) {
  const XmlDocument doc =
      parse("<r xmlns:p='urn:p' xmlns='urn:d'><p:c><p:d/></p:c></r>");
  const Selection sel = select_scoped(doc.root, {}, NodePath::parse("#/p:c"));
  EXPECT_EQ(canon(*sel.element, sel.inherited_ns),
            "<p:c xmlns=\"urn:d\" xmlns:p=\"urn:p\"><p:d></p:d></p:c>");
}

TEST(XmlCanonicalTest, RedundantDeclarationsAreDropped) {
  EXPECT_EQ(canon(parse("<a xmlns:p='u'><b xmlns:p='u'/><c xmlns:p='v'/></a>").root),
            "<a xmlns:p=\"u\"><b></b><c xmlns:p=\"v\"></c></a>");
}

TEST(XmlSelectTest, Paths) {
  const XmlDocument doc =
      parse("<e:eDocument xmlns:e='http://www.polito.it'><e:signedContent>"
            "<e:documentTypeData/></e:signedContent></e:eDocument>");
  EXPECT_EQ(&select(doc, NodePath{}), &doc.root);
  const XmlElement& sc = select(doc, NodePath::parse("#/e:signedContent"));
  EXPECT_EQ(sc.child_elements().at(0)->name.local, "documentTypeData");
  EXPECT_EQ(error_of([&] { select(doc, NodePath::parse("#/e:nonexistent")); }),
            Errc::kNodeNotFound);
}

TEST(XmlSelectTest, NodePathText) {
  EXPECT_EQ(NodePath::parse("#/").steps.size(), 0u);
  const NodePath p = NodePath::parse("#/aida:signedContent/polito:tax");
  ASSERT_EQ(p.steps.size(), 2u);
  EXPECT_EQ(p.steps[1].prefix, "polito");
  EXPECT_EQ(p.to_string(), "#/aida:signedContent/polito:tax");
  EXPECT_EQ(error_of([] { NodePath::parse("aida:x"); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_of([] { NodePath::parse("#/a:"); }), Errc::kInvalidArgument);
}

TEST(XmlIndentTest, LeavesTextContentAlone) {
  XmlElement root(XmlName{"", "", "r"});
  XmlElement& a = root.add_child(XmlElement(XmlName{"", "", "a"}));
  a.add_text("keep  me");
  root.add_child(XmlElement(XmlName{"", "", "b"}));
  indent(root);
  EXPECT_EQ(canon(root), "<r>\n  <a>keep  me</a>\n  <b></b>\n</r>");
}

TEST(XmlUtilTest, Utf8Length) {
  EXPECT_EQ(utf8_length(""), 0u);
  EXPECT_EQ(utf8_length("abc"), 3u);
  EXPECT_EQ(utf8_length("\xC3\xA9\xE2\x82\xAC\xF0\x9F\x99\x82"), 3u);
}

// Properties over generated documents.

TEST(XmlPropertyTest, SerializeRoundTrip) {
  testing::RandomXml gen(1);
  for (int i = 0; i < 300; ++i) {
    const XmlDocument doc = gen.document();
    ASSERT_EQ(parse(serialize(doc)), doc) << serialize_to_string(doc);
  }
}

TEST(XmlPropertyTest, CanonicalIdempotence) {
  testing::RandomXml gen(2);
  for (int i = 0; i < 300; ++i) {
    const XmlDocument doc = gen.document();
    const std::string once = canon(doc.root);
    ASSERT_EQ(canon(parse(once).root), once);
  }
}

TEST(XmlPropertyTest, ShuffledDeclarationsCanonicalizeIdentically) {
  testing::RandomXml gen(3);
  for (int i = 0; i < 300; ++i) {
    const XmlDocument doc = gen.document();
    std::string shuffled;
    testing::write_shuffled(shuffled, doc.root, gen.rng());
    ASSERT_EQ(canon(parse(shuffled).root), canon(doc.root)) << shuffled;
  }
}

}  // namespace
}  // namespace sigdoc::xml
