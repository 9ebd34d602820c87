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

#include "sigdoc/schema.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <regex>
#include <set>
#include <utility>

#include "sigdoc/error.hpp"

namespace sigdoc::schema {

using xml::XmlElement;
using xml::XmlName;

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(Errc::kMalformedDefinition, what);
}

[[noreturn]] void too_rich(const std::string& what) {
  throw Error(Errc::kSchemaTooRich, what);
}

bool is_definition_namespace(std::string_view ns) {
  return ns == kDefinitionNamespace || ns == kAlternateDefinitionNamespace;
}

std::string trimmed_text(const XmlElement& e) {
  if (!e.child_elements().empty()) {
    malformed("'" + e.name.qualified() + "' must hold only text");
  }
  return std::string(xml::trim_xml_whitespace(e.text()));
}

struct TagInfo {
  std::string_view tag;
  FieldKind kind;
};

constexpr TagInfo kTags[] = {
    {"string", FieldKind::kString},   {"shortString", FieldKind::kShortString},
    {"date", FieldKind::kDate},       {"time", FieldKind::kTime},
    {"int", FieldKind::kInt},         {"double", FieldKind::kDouble},
    {"Boolean", FieldKind::kBoolean}, {"boolean", FieldKind::kBoolean},
};

std::optional<FieldKind> kind_for_tag(std::string_view tag) {
  for (const auto& t : kTags) {
    if (t.tag == tag) return t.kind;
  }
  return std::nullopt;
}

std::string_view tag_for_kind(FieldKind kind) {
  return kind == FieldKind::kBoolean ? "Boolean" : field_kind_name(kind);
}

// XML Schema built-in name for a primitive kind.
std::string_view xsd_type(FieldKind kind) {
  switch (kind) {
    case FieldKind::kString:
    case FieldKind::kShortString: return "string";
    case FieldKind::kDate: return "date";
    case FieldKind::kTime: return "time";
    case FieldKind::kInt: return "int";
    case FieldKind::kDouble: return "double";
    case FieldKind::kBoolean: return "boolean";
  }
  return "string";
}

std::optional<int> parse_small_positive(std::string_view s) {
  if (s.empty() || s.size() > 9 || s.front() == '0') return std::nullopt;
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

FieldDef parse_field(const XmlElement& field, std::string_view ns) {
  FieldDef def;
  const XmlElement* name = nullptr;
  const XmlElement* type = nullptr;
  if (field.has_significant_text()) malformed("text inside aida:field");
  for (const XmlElement* c : field.child_elements()) {
    if (c->name.namespace_uri != ns) {
      malformed("foreign element '" + c->name.qualified() + "' in aida:field");
    }
    if (c->name.local == "name") {
      if (name) malformed("field with two aida:name elements");
      name = c;
    } else if (kind_for_tag(c->name.local)) {
      if (type) {
        malformed("field '" + (name ? trimmed_text(*name) : std::string("?")) +
                  "' has two type tags");
      }
      type = c;
    } else {
      malformed("unknown type tag 'aida:" + c->name.local + "'");
    }
  }
  if (!name) malformed("field without aida:name");
  def.name = trimmed_text(*name);
  if (!xml::is_ncname(def.name)) malformed("bad field name '" + def.name + "'");
  if (!type) malformed("field '" + def.name + "' has no type tag");
  if (!type->children.empty()) {
    malformed("type tag of field '" + def.name + "' must be empty");
  }
  def.type.kind = *kind_for_tag(type->name.local);
  for (const auto& a : type->attributes) {
    if (!a.name.namespace_uri.empty()) {
      malformed("unexpected attribute '" + a.name.qualified() + "'");
    }
    if (a.name.local == "max") {
      if (def.type.kind != FieldKind::kShortString) {
        malformed("max on non-shortString field '" + def.name + "'");
      }
      auto v = parse_small_positive(xml::trim_xml_whitespace(a.value));
      if (!v) malformed("bad max '" + a.value + "' on field '" + def.name + "'");
      if (*v > kShortStringLimit) {
        malformed("max " + a.value + " of field '" + def.name +
                  "' exceeds " + std::to_string(kShortStringLimit));
      }
      def.type.max_length = *v;
    } else if (a.name.local == "searchable") {
      if (a.value == "true") {
        def.searchable = true;
      } else if (a.value != "false") {
        malformed("searchable must be true or false on '" + def.name + "'");
      }
    } else {
      malformed("unexpected attribute '" + a.name.local + "' on field '" +
                def.name + "'");
    }
  }
  return def;
}

void check_generic(const GenericTypeDefinition& g) {
  if (!xml::is_ncname(g.document_root)) {
    malformed("bad documentRoot '" + g.document_root + "'");
  }
  if (g.document_namespace.empty()) malformed("empty documentNamespace");
  if (!xml::is_ncname(g.namespace_prefix) || g.namespace_prefix == "xsd" ||
      g.namespace_prefix.starts_with("xml")) {
    malformed("unusable namespacePrefix '" + g.namespace_prefix + "'");
  }
  if (g.fields.empty()) malformed("empty fieldList");
  std::set<std::string> names;
  for (const auto& f : g.fields) {
    if (!names.insert(f.name).second) malformed("duplicate field '" + f.name + "'");
  }
}

XmlName def_name(std::string_view local) {
  return XmlName{std::string(kDefinitionNamespace), "aida", std::string(local)};
}

XmlName xsd_name(std::string_view local) {
  return XmlName{std::string(kXsdNamespace), "xsd", std::string(local)};
}

XmlElement& add_xsd(XmlElement& parent, std::string_view local) {
  return parent.add_child(XmlElement(xsd_name(local)));
}

void set_attr(XmlElement& e, std::string_view local, std::string value) {
  e.set_attribute(XmlName{"", "", std::string(local)}, std::move(value));
}

// --- schema subset reader -------------------------------------------------

struct QName {
  std::string ns;
  std::string local;
};

class SchemaReader {
 public:
  SchemaReader(const XmlElement& schema, const xml::NamespaceMap& inherited)
      : schema_(schema), scope_(xml::scope_of(schema, inherited)) {}

  CompiledSchema read() {
    CompiledSchema out;
    only_attributes(schema_, {"targetNamespace"});
    auto tns = schema_.attribute("", "targetNamespace");
    if (!tns || tns->empty()) malformed("xsd:schema without targetNamespace");
    out.target_namespace = *tns;
    out.namespace_prefix = prefix_for(*tns);

    const XmlElement* root = nullptr;
    bool has_short_string = false;
    std::map<std::string, FieldType> decls;
    std::vector<std::string> decl_order;
    for (const XmlElement* c : xsd_children(schema_)) {
      if (c->name.local == "element" && c->find_child(kXsdNamespace, "complexType")) {
        if (root) too_rich("more than one complex element declaration");
        root = c;
      } else if (c->name.local == "element") {
        auto [name, type] = read_field(*c);
        if (decls.count(name)) malformed("element '" + name + "' declared twice");
        decls[name] = type;
        decl_order.push_back(name);
      } else if (c->name.local == "simpleType") {
        if (has_short_string) too_rich("more than one simple type");
        read_short_string(*c);
        has_short_string = true;
      } else {
        too_rich("unsupported construct 'xsd:" + c->name.local + "'");
      }
    }
    if (!root) malformed("no root element declaration");
    out.root_element = required(*root, "name");
    only_attributes(*root, {"name"});

    const auto ct = xsd_children(*root);
    if (ct.size() != 1 || ct[0]->name.local != "complexType") {
      too_rich("root declaration must hold one complexType");
    }
    only_attributes(*ct[0], {});
    const auto seq = xsd_children(*ct[0]);
    if (seq.size() != 1 || seq[0]->name.local != "sequence") {
      too_rich("complexType must hold one sequence");
    }
    only_attributes(*seq[0], {});
    std::set<std::string> used;
    for (const XmlElement* ref : xsd_children(*seq[0])) {
      if (ref->name.local != "element") {
        too_rich("sequence may hold only element references");
      }
      only_attributes(*ref, {"ref"});
      if (!ref->children.empty()) too_rich("element reference with content");
      const QName q = resolve(required(*ref, "ref"));
      if (q.ns != out.target_namespace) {
        malformed("reference '" + q.local + "' outside the target namespace");
      }
      auto it = decls.find(q.local);
      if (it == decls.end()) malformed("undeclared element '" + q.local + "'");
      if (!used.insert(q.local).second) {
        malformed("element '" + q.local + "' referenced twice");
      }
      if (it->second.kind == FieldKind::kShortString && !has_short_string) {
        malformed("shortString used but not declared");
      }
      out.fields.push_back({q.local, it->second});
    }
    if (out.fields.empty()) malformed("empty sequence");
    for (const auto& d : decl_order) {
      if (!used.count(d)) malformed("element '" + d + "' is not in the sequence");
    }
    return out;
  }

 private:
  std::vector<const XmlElement*> xsd_children(const XmlElement& e) {
    if (e.has_significant_text()) too_rich("text inside '" + e.name.qualified() + "'");
    auto kids = e.child_elements();
    for (const XmlElement* k : kids) {
      if (k->name.namespace_uri != kXsdNamespace) {
        too_rich("foreign element '" + k->name.qualified() + "' in schema");
      }
    }
    return kids;
  }

  static void only_attributes(const XmlElement& e,
                              std::initializer_list<std::string_view> allowed) {
    for (const auto& a : e.attributes) {
      const bool ok = a.name.namespace_uri.empty() &&
                      std::find(allowed.begin(), allowed.end(), a.name.local) !=
                          allowed.end();
      if (!ok) {
        too_rich("unsupported attribute '" + a.name.qualified() + "' on 'xsd:" +
                 e.name.local + "'");
      }
    }
  }

  static std::string required(const XmlElement& e, std::string_view local) {
    auto v = e.attribute("", local);
    if (!v) malformed("'xsd:" + e.name.local + "' lacks '" + std::string(local) + "'");
    return *v;
  }

  std::string prefix_for(const std::string& ns) const {
    for (const auto& [p, u] : schema_.namespace_declarations) {
      if (!p.empty() && u == ns) return p;
    }
    for (const auto& [p, u] : scope_) {
      if (!p.empty() && u == ns) return p;
    }
    malformed("no prefix bound to target namespace '" + ns + "'");
  }

  QName resolve(const std::string& qname) const {
    const auto colon = qname.find(':');
    const std::string prefix = colon == std::string::npos ? "" : qname.substr(0, colon);
    const std::string local =
        colon == std::string::npos ? qname : qname.substr(colon + 1);
    auto it = scope_.find(prefix);
    if (it == scope_.end()) malformed("unbound prefix in '" + qname + "'");
    return QName{it->second, local};
  }

  std::string target() const { return *schema_.attribute("", "targetNamespace"); }

  void read_short_string(const XmlElement& st) {
    only_attributes(st, {"name"});
    if (required(st, "name") != "shortString") {
      too_rich("unsupported simple type '" + required(st, "name") + "'");
    }
    const auto r = xsd_children(st);
    if (r.size() != 1 || r[0]->name.local != "restriction") {
      too_rich("shortString must be a restriction");
    }
    only_attributes(*r[0], {"base"});
    const QName base = resolve(required(*r[0], "base"));
    if (base.ns != kXsdNamespace || base.local != "string") {
      too_rich("shortString must restrict xsd:string");
    }
    if (read_max_length(*r[0]) != kShortStringLimit) {
      too_rich("shortString must have maxLength 250");
    }
  }

  int read_max_length(const XmlElement& restriction) {
    const auto facets = xsd_children(restriction);
    if (facets.size() != 1 || facets[0]->name.local != "maxLength") {
      too_rich("restriction must hold exactly one maxLength facet");
    }
    only_attributes(*facets[0], {"value"});
    if (!facets[0]->children.empty()) too_rich("maxLength with content");
    auto v = parse_small_positive(required(*facets[0], "value"));
    if (!v) malformed("bad maxLength value");
    return *v;
  }

  std::pair<std::string, FieldType> read_field(const XmlElement& e) {
    only_attributes(e, {"name", "type"});
    const std::string name = required(e, "name");
    if (!xml::is_ncname(name)) malformed("bad element name '" + name + "'");
    FieldType type;
    if (auto t = e.attribute("", "type")) {
      if (!e.child_elements().empty() || e.has_significant_text()) {
        too_rich("element '" + name + "' has both a type and content");
      }
      const QName q = resolve(*t);
      if (q.ns == target() && q.local == "shortString") {
        type.kind = FieldKind::kShortString;
      } else if (q.ns == kXsdNamespace) {
        static const std::map<std::string, FieldKind> kBuiltins = {
            {"string", FieldKind::kString}, {"date", FieldKind::kDate},
            {"time", FieldKind::kTime},     {"int", FieldKind::kInt},
            {"double", FieldKind::kDouble}, {"boolean", FieldKind::kBoolean}};
        auto it = kBuiltins.find(q.local);
        if (it == kBuiltins.end()) too_rich("unsupported type 'xsd:" + q.local + "'");
        type.kind = it->second;
      } else {
        too_rich("unsupported type '" + *t + "'");
      }
      return {name, type};
    }
    const auto st = xsd_children(e);
    if (st.size() != 1 || st[0]->name.local != "simpleType") {
      too_rich("element '" + name + "' must name a type or restrict shortString");
    }
    only_attributes(*st[0], {});
    const auto r = xsd_children(*st[0]);
    if (r.size() != 1 || r[0]->name.local != "restriction") {
      too_rich("element '" + name + "' must use a restriction");
    }
    only_attributes(*r[0], {"base"});
    const QName base = resolve(required(*r[0], "base"));
    if (base.ns != target() || base.local != "shortString") {
      too_rich("element '" + name + "' must restrict shortString");
    }
    type.kind = FieldKind::kShortString;
    type.max_length = read_max_length(*r[0]);
    if (*type.max_length > kShortStringLimit) {
      malformed("maxLength of '" + name + "' exceeds 250");
    }
    return {name, type};
  }

  const XmlElement& schema_;
  xml::NamespaceMap scope_;
};

// --- lexical checks -------------------------------------------------------

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return c >= '0' && c <= '9'; });
}

int two_digits(std::string_view s) { return (s[0] - '0') * 10 + (s[1] - '0'); }

bool valid_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  if (!all_digits(s.substr(0, 4)) || !all_digits(s.substr(5, 2)) ||
      !all_digits(s.substr(8, 2))) {
    return false;
  }
  const int year = std::stoi(std::string(s.substr(0, 4)));
  const int month = two_digits(s.substr(5, 2));
  const int day = two_digits(s.substr(8, 2));
  if (year < 1 || month < 1 || month > 12 || day < 1) return false;
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  const int limit = kDays[month - 1] + (month == 2 && leap ? 1 : 0);
  return day <= limit;
}

bool valid_time(std::string_view s) {
  if (s.size() != 12 || s[2] != ':' || s[5] != ':' || s[8] != '.') return false;
  if (!all_digits(s.substr(0, 2)) || !all_digits(s.substr(3, 2)) ||
      !all_digits(s.substr(6, 2)) || !all_digits(s.substr(9, 3))) {
    return false;
  }
  return two_digits(s.substr(0, 2)) <= 23 && two_digits(s.substr(3, 2)) <= 59 &&
         two_digits(s.substr(6, 2)) <= 59;
}

bool valid_int(std::string_view s) {
  std::string_view digits = s;
  if (!digits.empty() && digits.front() == '-') digits.remove_prefix(1);
  if (!all_digits(digits)) return false;
  if (digits.size() > 1 && digits.front() == '0') return false;
  if (s == "-0") return false;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return false;
  return v >= INT32_MIN && v <= INT32_MAX;
}

bool valid_double(std::string_view s) {
  static const std::regex kGrammar(R"([+-]?[0-9]+(\.[0-9]+)?([eE][+-]?[0-9]+)?)");
  if (!std::regex_match(s.begin(), s.end(), kGrammar)) return false;
  std::string_view body = s;
  if (body.front() == '+') body.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  return ec == std::errc() && ptr == body.data() + body.size() && std::isfinite(v);
}

}  // namespace

std::string_view field_kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::kString: return "string";
    case FieldKind::kShortString: return "shortString";
    case FieldKind::kDate: return "date";
    case FieldKind::kTime: return "time";
    case FieldKind::kInt: return "int";
    case FieldKind::kDouble: return "double";
    case FieldKind::kBoolean: return "boolean";
  }
  return "?";
}

std::optional<int> FieldType::effective_max() const {
  if (kind != FieldKind::kShortString) return std::nullopt;
  return max_length.value_or(kShortStringLimit);
}

DocumentTypeId::DocumentTypeId(std::string value) : value_(std::move(value)) {
  static const std::regex kShape(R"([A-Za-z][A-Za-z0-9+.\-]*://[^\s/]+(/\S*)?)");
  if (value_.size() > kTypeIdLimit) {
    throw Error(Errc::kInvalidTypeId,
                "document type ID longer than 100 characters (" +
                    std::to_string(value_.size()) + ")");
  }
  if (!std::regex_match(value_, kShape)) {
    throw Error(Errc::kInvalidTypeId,
                "document type ID '" + value_ + "' does not look like a URL");
  }
}

std::vector<std::string> CompiledSchema::element_order() const {
  std::vector<std::string> out;
  for (const auto& f : fields) out.push_back(f.name);
  return out;
}

const CompiledField* CompiledSchema::find(std::string_view name) const {
  for (const auto& f : fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

DocumentTypeDefinition::DocumentTypeDefinition(
    DocumentTypeId type_id, CompiledSchema schema,
    std::optional<GenericTypeDefinition> source_generic)
    : type_id_(std::move(type_id)),
      schema_(std::move(schema)),
      source_generic_(std::move(source_generic)) {
  if (source_generic_ && compile_schema(*source_generic_) != schema_) {
    malformed("schema does not match its generic definition");
  }
}

bool ValidationReport::has(std::string_view kind, std::string_view subject) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
    return v.kind == kind && (subject.empty() || v.subject == subject);
  });
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.subject + ": " + v.kind + " (" + v.message + ")";
  }
  return out;
}

GenericTypeDefinition parse_generic(const xml::XmlDocument& doc) {
  return parse_generic(doc.root);
}

GenericTypeDefinition parse_generic(const XmlElement& root) {
  const std::string& ns = root.name.namespace_uri;
  if (root.name.local != "genericSchema" || !is_definition_namespace(ns)) {
    malformed("expected aida:genericSchema, got '" + root.name.qualified() + "'");
  }
  if (root.has_significant_text()) malformed("text inside aida:genericSchema");
  GenericTypeDefinition g;
  std::set<std::string> seen;
  for (const XmlElement* c : root.child_elements()) {
    const std::string& local = c->name.local;
    if (c->name.namespace_uri != ns) {
      malformed("foreign element '" + c->name.qualified() + "'");
    }
    if (!seen.insert(local).second) malformed("duplicate aida:" + local);
    if (local == "documentRoot") {
      g.document_root = trimmed_text(*c);
    } else if (local == "documentNamespace") {
      g.document_namespace = trimmed_text(*c);
    } else if (local == "namespacePrefix") {
      g.namespace_prefix = trimmed_text(*c);
    } else if (local == "fieldList") {
      if (c->has_significant_text()) malformed("text inside aida:fieldList");
      for (const XmlElement* f : c->child_elements()) {
        if (!f->name.same_as(ns, "field")) {
          malformed("unexpected '" + f->name.qualified() + "' in aida:fieldList");
        }
        g.fields.push_back(parse_field(*f, ns));
      }
    } else {
      malformed("unexpected element aida:" + local);
    }
  }
  for (const char* required :
       {"documentRoot", "documentNamespace", "namespacePrefix", "fieldList"}) {
    if (!seen.count(required)) malformed(std::string("missing aida:") + required);
  }
  check_generic(g);
  return g;
}

XmlElement emit_generic(const GenericTypeDefinition& generic) {
  XmlElement root(def_name("genericSchema"));
  root.declare_namespace("aida", std::string(kDefinitionNamespace));
  root.add_child(XmlElement(def_name("documentRoot"))).add_text(generic.document_root);
  root.add_child(XmlElement(def_name("documentNamespace")))
      .add_text(generic.document_namespace);
  root.add_child(XmlElement(def_name("namespacePrefix")))
      .add_text(generic.namespace_prefix);
  XmlElement& list = root.add_child(XmlElement(def_name("fieldList")));
  for (const auto& f : generic.fields) {
    XmlElement& field = list.add_child(XmlElement(def_name("field")));
    field.add_child(XmlElement(def_name("name"))).add_text(f.name);
    XmlElement& tag = field.add_child(XmlElement(def_name(tag_for_kind(f.type.kind))));
    if (f.type.max_length) set_attr(tag, "max", std::to_string(*f.type.max_length));
    if (f.searchable) set_attr(tag, "searchable", "true");
  }
  return root;
}

CompiledSchema compile_schema(const GenericTypeDefinition& generic) {
  check_generic(generic);
  CompiledSchema s;
  s.root_element = generic.document_root;
  s.target_namespace = generic.document_namespace;
  s.namespace_prefix = generic.namespace_prefix;
  for (const auto& f : generic.fields) s.fields.push_back({f.name, f.type});
  return s;
}

DocumentTypeDefinition compile(const GenericTypeDefinition& generic,
                               const DocumentTypeId& type_id) {
  return DocumentTypeDefinition(type_id, compile_schema(generic), generic);
}

XmlElement emit_type_definition_element(const DocumentTypeDefinition& def,
                                        int depth) {
  const CompiledSchema& s = def.schema();
  XmlElement root(def_name("documentTypeData"));
  root.declare_namespace("aida", std::string(kDefinitionNamespace));
  root.declare_namespace("xsi", std::string(kXsiNamespace));
  root.set_attribute(XmlName{std::string(kXsiNamespace), "xsi", "schemaLocation"},
                     std::string(kDefinitionNamespace) + " aida:documentTypeData");
  root.add_child(XmlElement(def_name("documentTypeID"))).add_text(def.type_id().value());

  XmlElement& xs = root.add_child(XmlElement(def_name("schema")))
                       .add_child(XmlElement(xsd_name("schema")));
  xs.declare_namespace(s.namespace_prefix, s.target_namespace);
  xs.declare_namespace("xsd", std::string(kXsdNamespace));
  set_attr(xs, "targetNamespace", s.target_namespace);

  XmlElement& top = add_xsd(xs, "element");
  set_attr(top, "name", s.root_element);
  XmlElement& seq = add_xsd(add_xsd(top, "complexType"), "sequence");
  for (const auto& f : s.fields) {
    set_attr(add_xsd(seq, "element"), "ref", s.namespace_prefix + ":" + f.name);
  }

  XmlElement& st = add_xsd(xs, "simpleType");
  set_attr(st, "name", "shortString");
  XmlElement& base = add_xsd(st, "restriction");
  set_attr(base, "base", "xsd:string");
  set_attr(add_xsd(base, "maxLength"), "value", std::to_string(kShortStringLimit));

  for (const auto& f : s.fields) {
    XmlElement& e = add_xsd(xs, "element");
    set_attr(e, "name", f.name);
    if (f.type.kind == FieldKind::kShortString && f.type.max_length) {
      XmlElement& r = add_xsd(add_xsd(e, "simpleType"), "restriction");
      set_attr(r, "base", s.namespace_prefix + ":shortString");
      set_attr(add_xsd(r, "maxLength"), "value", std::to_string(*f.type.max_length));
    } else if (f.type.kind == FieldKind::kShortString) {
      set_attr(e, "type", s.namespace_prefix + ":shortString");
    } else {
      set_attr(e, "type", "xsd:" + std::string(xsd_type(f.type.kind)));
    }
  }

  if (def.source_generic()) root.add_child(emit_generic(*def.source_generic()));
  xml::indent(root, depth);
  return root;
}

xml::XmlDocument emit_type_definition(const DocumentTypeDefinition& def) {
  return xml::XmlDocument{emit_type_definition_element(def), "UTF-8"};
}

DocumentTypeDefinition parse_type_definition(const xml::XmlDocument& doc) {
  return parse_type_definition(doc.root);
}

DocumentTypeDefinition parse_type_definition(const XmlElement& root) {
  const std::string& ns = root.name.namespace_uri;
  if (root.name.local != "documentTypeData" || !is_definition_namespace(ns)) {
    malformed("expected aida:documentTypeData, got '" + root.name.qualified() + "'");
  }
  if (root.has_significant_text()) malformed("text inside aida:documentTypeData");
  const XmlElement* id = nullptr;
  const XmlElement* schema = nullptr;
  const XmlElement* generic = nullptr;
  for (const XmlElement* c : root.child_elements()) {
    const XmlElement** slot = nullptr;
    if (c->name.same_as(ns, "documentTypeID")) {
      slot = &id;
    } else if (c->name.same_as(ns, "schema")) {
      slot = &schema;
    } else if (c->name.local == "genericSchema" &&
               is_definition_namespace(c->name.namespace_uri)) {
      slot = &generic;
    } else {
      malformed("unexpected element '" + c->name.qualified() + "'");
    }
    if (*slot) malformed("duplicate '" + c->name.qualified() + "'");
    *slot = c;
  }
  if (!id) malformed("missing aida:documentTypeID");
  if (!schema) malformed("missing aida:schema");

  std::optional<DocumentTypeId> type_id;
  try {
    type_id.emplace(trimmed_text(*id));
  } catch (const Error& e) {
    malformed(e.what());
  }

  if (schema->has_significant_text()) malformed("text inside aida:schema");
  const auto xs = schema->child_elements();
  if (xs.size() != 1 || !xs[0]->name.same_as(kXsdNamespace, "schema")) {
    malformed("aida:schema must hold one xsd:schema");
  }
  const xml::NamespaceMap scope = xml::scope_of(*schema, xml::scope_of(root, {}));
  CompiledSchema compiled = SchemaReader(*xs[0], scope).read();

  std::optional<GenericTypeDefinition> source;
  if (generic) source = parse_generic(*generic);
  return DocumentTypeDefinition(std::move(*type_id), std::move(compiled),
                                std::move(source));
}

bool lexically_valid(FieldKind kind, std::string_view value) {
  switch (kind) {
    case FieldKind::kString:
    case FieldKind::kShortString: return true;
    case FieldKind::kDate: return valid_date(value);
    case FieldKind::kTime: return valid_time(value);
    case FieldKind::kInt: return valid_int(value);
    case FieldKind::kDouble: return valid_double(value);
    case FieldKind::kBoolean: return value == "true" || value == "false";
  }
  return false;
}

ValidationReport validate_instance(const XmlElement& instance_root,
                                   const DocumentTypeDefinition& def) {
  const CompiledSchema& s = def.schema();
  ValidationReport report;
  auto add = [&](std::string subject, std::string kind, std::string message) {
    report.violations.push_back(
        {std::move(subject), std::move(kind), std::move(message)});
  };

  if (!instance_root.name.same_as(s.target_namespace, s.root_element)) {
    add("root", "root",
        "expected {" + s.target_namespace + "}" + s.root_element + ", got {" +
            instance_root.name.namespace_uri + "}" + instance_root.name.local);
  }
  if (instance_root.has_significant_text()) {
    add("root", "structure", "text between fields");
  }

  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < s.fields.size(); ++i) position[s.fields[i].name] = i;

  std::set<std::string> seen;
  std::size_t last = 0;
  bool any = false;
  for (const XmlElement* c : instance_root.child_elements()) {
    const std::string& local = c->name.local;
    auto pos = position.find(local);
    if (c->name.namespace_uri != s.target_namespace || pos == position.end()) {
      add(c->name.qualified(), "unknown element",
          "element not declared by " + def.type_id().value());
      continue;
    }
    if (!seen.insert(local).second) {
      add(local, "duplicate", "field appears more than once");
      continue;
    }
    if (any && pos->second < last) {
      add(local, "field order",
          "field is out of the declared sequence order");
    }
    last = std::max(last, pos->second);
    any = true;

    if (!c->child_elements().empty()) {
      add(local, "structure", "field must hold text only");
      continue;
    }
    const FieldType& type = s.fields[pos->second].type;
    const std::string value = c->text();
    if (auto max = type.effective_max()) {
      const std::size_t n = xml::utf8_length(value);
      if (n > static_cast<std::size_t>(*max)) {
        add(local, "length",
            std::to_string(n) + " characters exceed the limit of " +
                std::to_string(*max));
      }
    }
    // Typed kinds collapse surrounding whitespace before the lexical check.
    const bool textual =
        type.kind == FieldKind::kString || type.kind == FieldKind::kShortString;
    if (!lexically_valid(type.kind,
                         textual ? value : xml::trim_xml_whitespace(value))) {
      add(local, "type",
          "'" + value + "' is not a valid " +
              std::string(field_kind_name(type.kind)));
    }
  }
  for (const auto& f : s.fields) {
    if (!seen.count(f.name)) add(f.name, "missing", "required field is absent");
  }
  return report;
}

}  // namespace sigdoc::schema
