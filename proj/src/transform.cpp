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

#include "sigdoc/transform.hpp"

#include <optional>
#include <utility>

#include "sigdoc/error.hpp"

namespace sigdoc::transform {

using xml::XmlElement;
using xml::XmlName;
using xml::XmlNode;

namespace {

[[noreturn]] void unsupported(const std::string& what) {
  throw Error(Errc::kUnsupportedStylesheet, what);
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(Errc::kMalformedTransformData, what);
}

bool is_xsl(const XmlName& n) { return n.namespace_uri == kXslNamespace; }

// "prefix:local" or "local" resolved in scope. Unprefixed names have no
// namespace, as in XPath.
XmlName resolve_qname(std::string_view text, const xml::NamespaceMap& scope,
                      std::string_view what) {
  const std::string_view q = xml::trim_xml_whitespace(text);
  const auto colon = q.find(':');
  XmlName name;
  if (colon == std::string_view::npos) {
    name.local = std::string(q);
  } else {
    name.prefix = std::string(q.substr(0, colon));
    name.local = std::string(q.substr(colon + 1));
    if (!xml::is_ncname(name.prefix)) {
      unsupported(std::string(what) + " '" + std::string(q) + "' is not a QName");
    }
    const auto it = scope.find(name.prefix);
    if (it == scope.end()) {
      unsupported(std::string(what) + " uses undeclared prefix '" + name.prefix + "'");
    }
    name.namespace_uri = it->second;
  }
  if (!xml::is_ncname(name.local)) {
    unsupported(std::string(what) + " '" + std::string(q) + "' is not a QName");
  }
  return name;
}

void only_attributes(const XmlElement& e, std::initializer_list<std::string_view> allowed) {
  for (const auto& a : e.attributes) {
    bool ok = a.name.namespace_uri.empty();
    if (ok) {
      ok = false;
      for (auto name : allowed) ok = ok || a.name.local == name;
    }
    if (!ok) {
      unsupported("attribute '" + a.name.qualified() + "' on " + e.name.qualified());
    }
  }
}

xml::NamespaceMap without_xsl(const xml::NamespaceMap& decls) {
  xml::NamespaceMap out;
  for (const auto& [prefix, uri] : decls) {
    if (uri != kXslNamespace) out.emplace(prefix, uri);
  }
  return out;
}

bool preserves_space(const XmlElement& e, bool inherited) {
  const auto v = e.attribute(xml::kXmlNamespace, "space");
  if (!v) return inherited;
  return *v == "preserve";
}

TemplateNode read_value_of(const XmlElement& e, const xml::NamespaceMap& scope) {
  only_attributes(e, {"select"});
  const auto select = e.attribute("", "select");
  if (!select) unsupported("xsl:value-of without select");
  if (!e.child_elements().empty() || e.has_significant_text()) {
    unsupported("xsl:value-of must be empty");
  }
  TemplateNode node;
  node.kind = TemplateNode::Kind::kValueOf;
  node.name = resolve_qname(*select, scope, "select");
  return node;
}

TemplateNode read_literal(const XmlElement& e, const xml::NamespaceMap& parent_scope,
                          bool preserve) {
  const xml::NamespaceMap scope = xml::scope_of(e, parent_scope);
  TemplateNode node;
  node.kind = TemplateNode::Kind::kElement;
  node.name = e.name;
  node.namespace_declarations = without_xsl(e.namespace_declarations);
  for (const auto& a : e.attributes) {
    if (is_xsl(a.name)) unsupported("attribute '" + a.name.qualified() + "'");
    if (a.value.find_first_of("{}") != std::string::npos) {
      unsupported("attribute value template in '" + a.name.qualified() + "'");
    }
    node.attributes.push_back(a);
  }
  preserve = preserves_space(e, preserve);
  for (const XmlNode& c : e.children) {
    if (c.is_text()) {
      if (!preserve && xml::is_xml_whitespace(c.text())) continue;
      TemplateNode t;
      t.text = c.text();
      node.children.push_back(std::move(t));
      continue;
    }
    const XmlElement& child = c.element();
    if (!is_xsl(child.name)) {
      node.children.push_back(read_literal(child, scope, preserve));
    } else if (child.name.local == "value-of") {
      node.children.push_back(read_value_of(child, xml::scope_of(child, scope)));
    } else {
      unsupported("instruction '" + child.name.qualified() + "'");
    }
  }
  return node;
}

void collect(const TemplateNode& n, std::vector<XmlName>& out) {
  if (n.kind == TemplateNode::Kind::kValueOf) out.push_back(n.name);
  for (const auto& c : n.children) collect(c, out);
}

void append_text(XmlElement& e, const std::string& text) {
  if (text.empty()) return;
  if (!e.children.empty() && e.children.back().is_text()) {
    e.children.back().text() += text;
  } else {
    e.add_text(text);
  }
}

XmlElement render(const TemplateNode& node, const XmlElement& instance) {
  XmlElement out(node.name);
  out.attributes = node.attributes;
  out.namespace_declarations = node.namespace_declarations;
  for (const auto& c : node.children) {
    switch (c.kind) {
      case TemplateNode::Kind::kElement:
        out.add_child(render(c, instance));
        break;
      case TemplateNode::Kind::kText:
        append_text(out, c.text);
        break;
      case TemplateNode::Kind::kValueOf: {
        const XmlElement* field =
            instance.find_child(c.name.namespace_uri, c.name.local);
        if (!field) {
          throw Error(Errc::kMissingField,
                      "instance has no '" + c.name.qualified() + "'");
        }
        append_text(out, field->string_value());
        break;
      }
    }
  }
  return out;
}

XmlName envelope_name(std::string_view local) {
  return XmlName{std::string(kTransformNamespace), "aida", std::string(local)};
}

XmlElement& add_text_child(XmlElement& parent, std::string_view local,
                           std::string text) {
  XmlElement& e = parent.add_child(XmlElement(envelope_name(local)));
  e.add_text(std::move(text));
  return e;
}

void check(const TransformData& t) {
  if (t.transform_id.empty()) malformed("empty transform id");
  if (t.transform_method != "xslt") {
    malformed("unsupported transform method '" + t.transform_method + "'");
  }
  if (t.output_format != "mhtml") {
    malformed("unsupported output format '" + t.output_format + "'");
  }
}

bool is_envelope_namespace(std::string_view ns) {
  return ns == kTransformNamespace || ns == schema::kDefinitionNamespace;
}

// Child elements of `e` with exactly the given local names, in order.
std::vector<const XmlElement*> expect_children(
    const XmlElement& e, std::initializer_list<std::string_view> names) {
  if (e.has_significant_text()) malformed("text inside " + e.name.qualified());
  const auto kids = e.child_elements();
  std::vector<const XmlElement*> out;
  auto it = kids.begin();
  for (auto name : names) {
    if (it == kids.end()) {
      malformed(e.name.qualified() + " lacks aida:" + std::string(name));
    }
    if (!(*it)->name.same_as(e.name.namespace_uri, name)) {
      malformed("expected aida:" + std::string(name) + " in " + e.name.qualified() +
                ", got '" + (*it)->name.qualified() + "'");
    }
    out.push_back(*it++);
  }
  if (it != kids.end()) {
    malformed("unexpected '" + (*it)->name.qualified() + "' in " + e.name.qualified());
  }
  return out;
}

std::string value_of(const XmlElement& e) {
  if (!e.child_elements().empty()) malformed(e.name.qualified() + " must hold only text");
  return std::string(xml::trim_xml_whitespace(e.text()));
}

}  // namespace

std::vector<XmlName> Stylesheet::placeholders() const {
  std::vector<XmlName> out;
  collect(body, out);
  return out;
}

Stylesheet parse_stylesheet(const xml::XmlDocument& doc) {
  return parse_stylesheet(doc.root);
}

Stylesheet parse_stylesheet(const XmlElement& root) {
  if (!is_xsl(root.name) ||
      (root.name.local != "stylesheet" && root.name.local != "transform")) {
    unsupported("expected xsl:stylesheet, got '" + root.name.qualified() + "'");
  }
  only_attributes(root, {"version"});
  if (root.attribute("", "version") != "1.0") unsupported("version must be 1.0");
  if (root.has_significant_text()) unsupported("text at stylesheet level");

  const xml::NamespaceMap scope = xml::scope_of(root, {});
  const XmlElement* output = nullptr;
  const XmlElement* tmpl = nullptr;
  for (const XmlElement* c : root.child_elements()) {
    const XmlElement** slot = nullptr;
    if (is_xsl(c->name) && c->name.local == "output") {
      slot = &output;
    } else if (is_xsl(c->name) && c->name.local == "template") {
      slot = &tmpl;
    } else {
      unsupported("top-level element '" + c->name.qualified() + "'");
    }
    if (*slot) unsupported("more than one " + c->name.qualified());
    *slot = c;
  }
  if (!output) unsupported("missing xsl:output");
  if (!tmpl) unsupported("missing xsl:template");

  only_attributes(*output, {"method"});
  if (output->attribute("", "method").value_or("xml") != "xml") {
    unsupported("output method must be xml");
  }
  if (!output->children.empty() && !xml::is_xml_whitespace(output->string_value())) {
    unsupported("xsl:output must be empty");
  }

  only_attributes(*tmpl, {"match"});
  const auto match = tmpl->attribute("", "match");
  if (!match) unsupported("xsl:template without match");
  const xml::NamespaceMap tmpl_scope = xml::scope_of(*tmpl, scope);

  Stylesheet sheet;
  sheet.match_root = resolve_qname(*match, tmpl_scope, "match");
  sheet.match_root.prefix.clear();

  if (tmpl->has_significant_text()) unsupported("template body must be one element");
  const auto body = tmpl->child_elements();
  if (body.size() != 1) unsupported("template body must be one element");
  if (is_xsl(body[0]->name)) {
    unsupported("template body must be a literal result element");
  }
  sheet.body = read_literal(*body[0], tmpl_scope, false);
  // The result root carries every binding in scope, minus the XSLT one.
  for (const auto& [prefix, uri] : without_xsl(tmpl_scope)) {
    sheet.body.namespace_declarations.emplace(prefix, uri);
  }
  sheet.source = root;
  return sheet;
}

xml::XmlDocument apply(const Stylesheet& sheet, const XmlElement& instance_root) {
  if (!instance_root.name.same_as(sheet.match_root)) {
    throw Error(Errc::kMatchFailure,
                "template matches {" + sheet.match_root.namespace_uri + "}" +
                    sheet.match_root.local + ", instance root is {" +
                    instance_root.name.namespace_uri + "}" +
                    instance_root.name.local);
  }
  return xml::XmlDocument{render(sheet.body, instance_root), "UTF-8"};
}

XmlElement emit_transform_data_element(const TransformData& t, int depth) {
  check(t);
  XmlElement root(envelope_name("transformData"));
  root.declare_namespace("aida", std::string(kTransformNamespace));
  root.declare_namespace("xsi", std::string(schema::kXsiNamespace));
  root.set_attribute(
      XmlName{std::string(schema::kXsiNamespace), "xsi", "schemaLocation"},
      std::string(kTransformNamespace) + " aida:displayData");
  add_text_child(root, "transformDataID", t.transform_id);
  add_text_child(root, "documentTypeID", t.document_type_id.value());
  XmlElement& caps = root.add_child(XmlElement(envelope_name("requiredDisplayCapabilities")));
  add_text_child(caps, "transformMethod", t.transform_method);
  add_text_child(caps, "language", t.language);
  add_text_child(caps, "outputFormat", t.output_format);
  root.add_child(XmlElement(envelope_name("transform")))
      .add_child(XmlElement(envelope_name("documentFrameXSLStylesheet")))
      .add_child(XmlElement(XmlName{std::string(kXslNamespace), "xsl", "stylesheet"}));
  xml::indent(root, depth);

  // Swap the placeholder for the stylesheet as written. indent rebuilt the
  // child lists, so look the frame up again.
  XmlElement& frame = *root.child_elements().back()->child_elements().front();
  for (XmlNode& n : frame.children) {
    if (n.is_element()) n = t.stylesheet.source;
  }
  return root;
}

xml::XmlDocument emit_transform_data(const TransformData& t) {
  return xml::XmlDocument{emit_transform_data_element(t), "UTF-8"};
}

TransformData parse_transform_data(const xml::XmlDocument& doc) {
  return parse_transform_data(doc.root);
}

TransformData parse_transform_data(const XmlElement& root) {
  if (root.name.local != "transformData" ||
      !is_envelope_namespace(root.name.namespace_uri)) {
    malformed("expected aida:transformData, got '" + root.name.qualified() + "'");
  }
  const auto parts = expect_children(
      root, {"transformDataID", "documentTypeID", "requiredDisplayCapabilities",
             "transform"});
  const auto caps =
      expect_children(*parts[2], {"transformMethod", "language", "outputFormat"});
  const auto frame = expect_children(*parts[3], {"documentFrameXSLStylesheet"});
  if (frame[0]->has_significant_text() || frame[0]->child_elements().size() != 1) {
    malformed("aida:documentFrameXSLStylesheet must hold one stylesheet");
  }

  TransformData t;
  t.transform_id = value_of(*parts[0]);
  try {
    t.document_type_id = schema::DocumentTypeId(value_of(*parts[1]));
  } catch (const Error& e) {
    if (e.code() != Errc::kInvalidTypeId) throw;
    malformed(e.what());
  }
  t.transform_method = value_of(*caps[0]);
  t.language = value_of(*caps[1]);
  t.output_format = value_of(*caps[2]);
  check(t);
  t.stylesheet = parse_stylesheet(*frame[0]->child_elements()[0]);
  return t;
}

}  // namespace sigdoc::transform
