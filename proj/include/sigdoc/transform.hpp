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

// A closed subset of XSLT 1.0: one xsl:output, one template matching the
// instance root by QName, and a body of literal result elements, literal
// text and xsl:value-of over a single child step. Also the transformData
// wrapper that carries such a stylesheet with its display metadata.
//
// A stylesheet is self-contained: prefixes in match and select resolve
// against declarations on xsl:stylesheet and below, never against the
// document it happens to sit in.

#ifndef SIGDOC_TRANSFORM_HPP_
#define SIGDOC_TRANSFORM_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "sigdoc/schema.hpp"
#include "sigdoc/xml.hpp"

namespace sigdoc::transform {

inline constexpr std::string_view kXslNamespace =
    "http://www.w3.org/1999/XSL/Transform";
// transformData envelope namespace.
inline constexpr std::string_view kTransformNamespace = "http://www.polito.it";

struct TemplateNode {
  enum class Kind { kElement, kText, kValueOf };

  Kind kind = Kind::kText;
  xml::XmlName name;  // element name, or the selected field for kValueOf
  std::vector<xml::Attribute> attributes;
  xml::NamespaceMap namespace_declarations;
  std::string text;
  std::vector<TemplateNode> children;

  bool operator==(const TemplateNode&) const = default;
};

struct Stylesheet {
  xml::XmlName match_root;
  // The single literal result element the template produces.
  TemplateNode body;
  // xsl:stylesheet as written, for re-emission.
  xml::XmlElement source;

  // Fields named by xsl:value-of, in document order.
  std::vector<xml::XmlName> placeholders() const;

  bool operator==(const Stylesheet&) const = default;
};

struct TransformData {
  std::string transform_id;
  schema::DocumentTypeId document_type_id;
  std::string transform_method = "xslt";
  std::string language = "en";
  std::string output_format = "mhtml";
  Stylesheet stylesheet;

  bool operator==(const TransformData&) const = default;
};

// Throws Errc::kUnsupportedStylesheet.
Stylesheet parse_stylesheet(const xml::XmlDocument& doc);
Stylesheet parse_stylesheet(const xml::XmlElement& stylesheet);

// Throws Errc::kMatchFailure or Errc::kMissingField.
xml::XmlDocument apply(const Stylesheet& sheet, const xml::XmlElement& instance_root);

// aida:transformData, indented for the given depth. The stylesheet is
// copied verbatim.
xml::XmlElement emit_transform_data_element(const TransformData& t, int depth = 0);
xml::XmlDocument emit_transform_data(const TransformData& t);

// Throws Errc::kMalformedTransformData, or kUnsupportedStylesheet for the
// embedded stylesheet.
TransformData parse_transform_data(const xml::XmlElement& root);
TransformData parse_transform_data(const xml::XmlDocument& doc);

}  // namespace sigdoc::transform

#endif  // SIGDOC_TRANSFORM_HPP_
