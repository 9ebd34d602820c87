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

// Minimal namespace-aware XML document model.
//
// The parser accepts the well-formed subset used by signed e-documents:
// elements, attributes, namespace declarations, character data and the
// character/predefined entity references. DTDs, CDATA sections, comments and
// processing instructions (other than the XML declaration) are rejected.
// Text is never trimmed; whitespace between elements is kept as text nodes.

#ifndef SIGDOC_XML_HPP_
#define SIGDOC_XML_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sigdoc::xml {

using Bytes = std::vector<std::uint8_t>;

// prefix -> namespace URI. The empty prefix is the default namespace.
using NamespaceMap = std::map<std::string, std::string>;

inline constexpr std::string_view kXmlNamespace =
    "http://www.w3.org/XML/1998/namespace";

struct XmlName {
  std::string namespace_uri;
  std::string prefix;
  std::string local;

  // "prefix:local" or "local".
  std::string qualified() const;
  // Compares namespace URI and local name, ignoring the prefix.
  bool same_as(const XmlName& other) const {
    return namespace_uri == other.namespace_uri && local == other.local;
  }
  bool same_as(std::string_view ns, std::string_view local_name) const {
    return namespace_uri == ns && local == local_name;
  }

  bool operator==(const XmlName&) const = default;
};

// True when `s` is usable as an NCName (no colon, no markup characters, no
// whitespace, non-empty, does not start with a digit, '-' or '.').
bool is_ncname(std::string_view s);

struct Attribute {
  XmlName name;
  std::string value;

  bool operator==(const Attribute&) const = default;
};

class XmlNode;

struct XmlElement {
  XmlName name;
  std::vector<Attribute> attributes;
  NamespaceMap namespace_declarations;
  std::vector<XmlNode> children;

  XmlElement() = default;
  explicit XmlElement(XmlName n) : name(std::move(n)) {}

  XmlElement& add_child(XmlElement child);
  XmlElement& add_text(std::string text);
  XmlElement& set_attribute(XmlName attr_name, std::string value);
  XmlElement& declare_namespace(std::string prefix, std::string uri);

  std::optional<std::string> attribute(std::string_view ns,
                                       std::string_view local) const;
  // Direct child elements, in document order.
  std::vector<const XmlElement*> child_elements() const;
  std::vector<XmlElement*> child_elements();
  // First child element with the given expanded name, or nullptr.
  const XmlElement* find_child(std::string_view ns,
                               std::string_view local) const;
  // Concatenation of the direct text children.
  std::string text() const;
  // Concatenation of all descendant text, in document order.
  std::string string_value() const;
  // True when some direct text child contains a non-whitespace character.
  bool has_significant_text() const;

  bool operator==(const XmlElement& other) const;
};

class XmlNode {
 public:
  XmlNode(XmlElement e) : value_(std::move(e)) {}  // NOLINT
  XmlNode(std::string t) : value_(std::move(t)) {}  // NOLINT

  bool is_element() const { return value_.index() == 0; }
  bool is_text() const { return value_.index() == 1; }
  const XmlElement& element() const { return std::get<0>(value_); }
  XmlElement& element() { return std::get<0>(value_); }
  const std::string& text() const { return std::get<1>(value_); }
  std::string& text() { return std::get<1>(value_); }

  bool operator==(const XmlNode& other) const { return value_ == other.value_; }

 private:
  std::variant<XmlElement, std::string> value_;
};

struct XmlDocument {
  XmlElement root;
  std::string encoding_label = "UTF-8";

  bool operator==(const XmlDocument&) const = default;
};

// A child-element path from a document root. An empty path selects the root.
// Serialized as "#/" followed by slash-joined "prefix:local" steps.
struct NodePath {
  std::vector<XmlName> steps;

  static NodePath parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const NodePath&) const = default;
};

XmlDocument parse(std::span<const std::uint8_t> bytes);
XmlDocument parse(std::string_view text);

// XML declaration line followed by the tree. Empty elements are written
// self-closing; nothing is re-indented.
Bytes serialize(const XmlDocument& doc);
std::string serialize_to_string(const XmlDocument& doc);

// Deterministic canonical bytes of `element` given the namespace bindings in
// scope at its parent. The apex declares every in-scope binding; descendants
// declare only bindings that differ from their parent's scope. Namespace
// declarations come first sorted by prefix, then attributes sorted by
// (namespace URI, local name). Empty elements get an explicit end tag.
Bytes canonicalize(const XmlElement& element, const NamespaceMap& inherited_ns);

// Resolved selection result: the element and the bindings in scope at its
// parent (suitable for passing to canonicalize).
struct Selection {
  const XmlElement* element;
  NamespaceMap inherited_ns;
};

// Follows the path from the root, taking the first matching child at every
// step. A step with a namespace URI matches by expanded name; a step without
// one matches by qualified name. Throws Errc::kNodeNotFound.
const XmlElement& select(const XmlDocument& doc, const NodePath& path);
Selection select_scoped(const XmlElement& root, const NamespaceMap& root_scope,
                        const NodePath& path);

// Bindings in scope inside `element` given those in scope at its parent.
NamespaceMap scope_of(const XmlElement& element, const NamespaceMap& inherited);

// Inserts indentation text nodes into element-only content, recursively.
// Elements holding any text are left untouched, as are their descendants.
void indent(XmlElement& element, int depth = 0, int width = 2);

// Whitespace per the XML production S: space, tab, CR, LF.
bool is_xml_whitespace(std::string_view s);
std::string_view trim_xml_whitespace(std::string_view s);

// Number of Unicode scalar values in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

}  // namespace sigdoc::xml

#endif  // SIGDOC_XML_HPP_
