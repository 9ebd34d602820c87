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

// Generic type definitions (a flat list of typed fields), their compilation
// into document type definitions carrying a small XML Schema, and instance
// validation against the compiled form.
//
// Only a narrow schema subset is understood: one root element holding a
// sequence of element references, a shortString simple type, and one
// declaration per field that either names a primitive type or restricts
// shortString with a maxLength. Anything else is rejected as too rich.

#ifndef SIGDOC_SCHEMA_HPP_
#define SIGDOC_SCHEMA_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sigdoc/xml.hpp"

namespace sigdoc::schema {

// Namespace of generic definitions and the documentTypeData wrapper.
inline constexpr std::string_view kDefinitionNamespace = "http://aida.infonova.at";
// Also accepted on input for the same vocabulary.
inline constexpr std::string_view kAlternateDefinitionNamespace =
    "http://www.polito.it";
inline constexpr std::string_view kXsdNamespace =
    "http://www.w3.org/2001/XMLSchema";
inline constexpr std::string_view kXsiNamespace =
    "http://www.w3.org/2001/XMLSchema-instance";

inline constexpr int kShortStringLimit = 250;
inline constexpr std::size_t kTypeIdLimit = 100;

enum class FieldKind { kString, kShortString, kDate, kTime, kInt, kDouble, kBoolean };

std::string_view field_kind_name(FieldKind kind);

struct FieldType {
  FieldKind kind = FieldKind::kString;
  // shortString only; absent means the 250 character ceiling.
  std::optional<int> max_length;

  // Length ceiling in characters, if any.
  std::optional<int> effective_max() const;

  bool operator==(const FieldType&) const = default;
};

struct FieldDef {
  std::string name;
  FieldType type;
  // Carried through parse and emit; has no other effect.
  bool searchable = false;

  bool operator==(const FieldDef&) const = default;
};

struct GenericTypeDefinition {
  std::string document_root;
  std::string document_namespace;
  std::string namespace_prefix;
  std::vector<FieldDef> fields;

  bool operator==(const GenericTypeDefinition&) const = default;
};

// At most 100 characters, shaped like "scheme://authority/path".
class DocumentTypeId {
 public:
  DocumentTypeId() = default;
  // Throws Errc::kInvalidTypeId.
  explicit DocumentTypeId(std::string value);

  const std::string& value() const { return value_; }

  bool operator==(const DocumentTypeId&) const = default;

 private:
  std::string value_;
};

struct CompiledField {
  std::string name;
  FieldType type;

  bool operator==(const CompiledField&) const = default;
};

struct CompiledSchema {
  std::string root_element;
  std::string target_namespace;
  std::string namespace_prefix;
  std::vector<CompiledField> fields;  // declaration order is sequence order

  std::vector<std::string> element_order() const;
  const CompiledField* find(std::string_view name) const;

  bool operator==(const CompiledSchema&) const = default;
};

class DocumentTypeDefinition {
 public:
  // Throws Errc::kMalformedDefinition when `source_generic` is present and
  // does not compile to `schema`.
  DocumentTypeDefinition(DocumentTypeId type_id, CompiledSchema schema,
                         std::optional<GenericTypeDefinition> source_generic);

  const DocumentTypeId& type_id() const { return type_id_; }
  const CompiledSchema& schema() const { return schema_; }
  const std::optional<GenericTypeDefinition>& source_generic() const {
    return source_generic_;
  }

  bool operator==(const DocumentTypeDefinition&) const = default;

 private:
  DocumentTypeId type_id_;
  CompiledSchema schema_;
  std::optional<GenericTypeDefinition> source_generic_;
};

struct Violation {
  std::string subject;  // field name or structural part
  std::string kind;     // "field order", "length", "type", "missing", ...
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
  bool has(std::string_view kind, std::string_view subject = {}) const;
  std::string summary() const;
};

// Throws Errc::kMalformedDefinition.
GenericTypeDefinition parse_generic(const xml::XmlDocument& doc);
GenericTypeDefinition parse_generic(const xml::XmlElement& root);
xml::XmlElement emit_generic(const GenericTypeDefinition& generic);

CompiledSchema compile_schema(const GenericTypeDefinition& generic);
DocumentTypeDefinition compile(const GenericTypeDefinition& generic,
                               const DocumentTypeId& type_id);

// aida:documentTypeData, indented for a document root.
xml::XmlElement emit_type_definition_element(const DocumentTypeDefinition& def,
                                             int depth = 0);
xml::XmlDocument emit_type_definition(const DocumentTypeDefinition& def);

// Throws Errc::kMalformedDefinition or Errc::kSchemaTooRich.
DocumentTypeDefinition parse_type_definition(const xml::XmlElement& root);
DocumentTypeDefinition parse_type_definition(const xml::XmlDocument& doc);

// True when `value` is a lexically valid literal of the primitive kind
// (length limits aside).
bool lexically_valid(FieldKind kind, std::string_view value);

ValidationReport validate_instance(const xml::XmlElement& instance_root,
                                   const DocumentTypeDefinition& def);

}  // namespace sigdoc::schema

#endif  // SIGDOC_SCHEMA_HPP_
