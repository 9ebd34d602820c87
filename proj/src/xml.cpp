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

#include <algorithm>
#include <cstring>

#include "sigdoc/error.hpp"

namespace sigdoc::xml {
namespace {

constexpr int kMaxDepth = 512;

[[noreturn]] void malformed(const std::string& what, std::size_t offset) {
  throw Error(Errc::kMalformedXml,
              what + " at byte offset " + std::to_string(offset));
}

bool is_xml_char(char32_t c) {
  return c == 0x9 || c == 0xA || c == 0xD || (c >= 0x20 && c <= 0xD7FF) ||
         (c >= 0xE000 && c <= 0xFFFD) || (c >= 0x10000 && c <= 0x10FFFF);
}

// Decodes one UTF-8 sequence at `pos`. Returns the code point and advances
// `pos`, or returns nullopt on an invalid sequence.
std::optional<char32_t> decode_utf8(std::string_view s, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return std::nullopt;
  }
  if (pos + len > s.size()) return std::nullopt;
  for (int i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  // Reject overlong forms and surrogates.
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
    return std::nullopt;
  }
  pos += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Validates that every code point of `s` is a legal XML character.
// Returns the offset of the first offending byte, or npos.
std::size_t find_illegal_char(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t at = pos;
    auto cp = decode_utf8(s, pos);
    if (!cp || !is_xml_char(*cp)) return at;
  }
  return std::string_view::npos;
}

bool is_name_start(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
         c == ':' || u >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

std::pair<std::string, std::string> split_qname(std::string_view qname) {
  const auto colon = qname.find(':');
  if (colon == std::string_view::npos) return {"", std::string(qname)};
  return {std::string(qname.substr(0, colon)),
          std::string(qname.substr(colon + 1))};
}

struct RawAttribute {
  std::string qname;
  std::string value;
  std::size_t offset;
};

class Parser {
 public:
  explicit Parser(std::string text) : in_(std::move(text)) {}

  XmlDocument parse_document() {
    if (in_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
    if (const auto bad = find_illegal_char(in_); bad != std::string::npos) {
      malformed("illegal character", bad);
    }
    normalize_line_ends();

    XmlDocument doc;
    if (std::string_view(in_).substr(pos_).starts_with("<?xml") &&
        pos_ + 5 < in_.size() && is_space(in_[pos_ + 5])) {
      parse_declaration();
    }
    skip_misc();
    if (pos_ >= in_.size() || in_[pos_] != '<') {
      malformed("expected root element", pos_);
    }
    doc.root = parse_element(NamespaceMap{}, 0);
    skip_misc();
    if (pos_ != in_.size()) malformed("content after root element", pos_);
    return doc;
  }

 private:
  void normalize_line_ends() {
    std::string out;
    out.reserve(in_.size());
    for (std::size_t i = 0; i < in_.size(); ++i) {
      if (in_[i] == '\r') {
        out.push_back('\n');
        if (i + 1 < in_.size() && in_[i + 1] == '\n') ++i;
      } else {
        out.push_back(in_[i]);
      }
    }
    // Offsets after this point refer to the normalized text.
    in_ = std::move(out);
  }

  bool at(std::string_view s) const {
    return std::string_view(in_).substr(pos_).starts_with(s);
  }

  void expect(std::string_view s) {
    if (!at(s)) malformed("expected '" + std::string(s) + "'", pos_);
    pos_ += s.size();
  }

  void skip_space() {
    while (pos_ < in_.size() && is_space(in_[pos_])) ++pos_;
  }

  void reject_constructs() {
    if (at("<!--")) {
      throw Error(Errc::kUnsupportedConstruct,
                  "comments are not supported (offset " +
                      std::to_string(pos_) + ")");
    }
    if (at("<![CDATA[")) {
      throw Error(Errc::kUnsupportedConstruct,
                  "CDATA sections are not supported (offset " +
                      std::to_string(pos_) + ")");
    }
    if (at("<!")) {
      throw Error(Errc::kUnsupportedConstruct,
                  "DTD declarations are not supported (offset " +
                      std::to_string(pos_) + ")");
    }
    if (at("<?")) {
      throw Error(Errc::kUnsupportedConstruct,
                  "processing instructions are not supported (offset " +
                      std::to_string(pos_) + ")");
    }
  }

  void skip_misc() {
    skip_space();
    if (pos_ < in_.size()) reject_constructs();
  }

  std::string parse_name() {
    const std::size_t start = pos_;
    if (pos_ >= in_.size() || !is_name_start(in_[pos_])) {
      malformed("expected a name", pos_);
    }
    while (pos_ < in_.size() && is_name_char(in_[pos_])) ++pos_;
    return in_.substr(start, pos_ - start);
  }

  std::string parse_quoted(bool decode_refs) {
    if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\'')) {
      malformed("expected quoted value", pos_);
    }
    const char quote = in_[pos_++];
    std::string out;
    while (pos_ < in_.size() && in_[pos_] != quote) {
      const char c = in_[pos_];
      if (c == '<') malformed("'<' in attribute value", pos_);
      if (c == '&' && decode_refs) {
        parse_reference(out);
      } else {
        out.push_back(c);
        ++pos_;
      }
    }
    if (pos_ >= in_.size()) malformed("unterminated quoted value", pos_);
    ++pos_;
    return out;
  }

  void parse_declaration() {
    const std::size_t start = pos_;
    expect("<?xml");
    std::optional<std::string> version;
    std::optional<std::string> encoding;
    for (;;) {
      const std::size_t before = pos_;
      skip_space();
      if (at("?>")) {
        pos_ += 2;
        break;
      }
      if (pos_ == before) malformed("bad XML declaration", pos_);
      const std::string key = parse_name();
      skip_space();
      expect("=");
      skip_space();
      std::string value = parse_quoted(false);
      if (key == "version") {
        version = value;
      } else if (key == "encoding") {
        encoding = value;
      } else if (key != "standalone") {
        malformed("unknown XML declaration field '" + key + "'", pos_);
      }
    }
    if (!version || !version->starts_with("1.")) {
      malformed("XML declaration lacks a 1.x version", start);
    }
    if (encoding) {
      std::string lower = *encoding;
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      if (lower != "utf-8" && lower != "utf8") {
        throw Error(Errc::kUnsupportedEncoding,
                    "declared encoding '" + *encoding +
                        "'; only UTF-8 is supported");
      }
    }
  }

  void parse_reference(std::string& out) {
    const std::size_t start = pos_;
    ++pos_;  // '&'
    const auto semi = in_.find(';', pos_);
    if (semi == std::string::npos || semi - pos_ > 16) {
      malformed("unterminated reference", start);
    }
    const std::string_view ref(in_.data() + pos_, semi - pos_);
    pos_ = semi + 1;
    if (ref == "amp") {
      out.push_back('&');
    } else if (ref == "lt") {
      out.push_back('<');
    } else if (ref == "gt") {
      out.push_back('>');
    } else if (ref == "quot") {
      out.push_back('"');
    } else if (ref == "apos") {
      out.push_back('\'');
    } else if (ref.starts_with("#")) {
      const bool hex = ref.starts_with("#x");
      const std::string_view digits = ref.substr(hex ? 2 : 1);
      if (digits.empty()) malformed("empty character reference", start);
      char32_t cp = 0;
      for (char c : digits) {
        int v = -1;
        if (c >= '0' && c <= '9') v = c - '0';
        if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
        if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
        if (v < 0) malformed("bad character reference", start);
        cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
        if (cp > 0x10FFFF) malformed("character reference out of range", start);
      }
      if (!is_xml_char(cp)) malformed("illegal character reference", start);
      append_utf8(out, cp);
    } else {
      throw Error(Errc::kUnsupportedConstruct,
                  "entity reference '&" + std::string(ref) +
                      ";' (only predefined entities are supported)");
    }
  }

  XmlElement parse_element(const NamespaceMap& parent_scope, int depth) {
    if (depth > kMaxDepth) malformed("nesting too deep", pos_);
    const std::size_t start = pos_;
    expect("<");
    const std::string qname = parse_name();
    std::vector<RawAttribute> raw;
    bool empty = false;
    for (;;) {
      const std::size_t before = pos_;
      skip_space();
      if (at("/>")) {
        pos_ += 2;
        empty = true;
        break;
      }
      if (at(">")) {
        ++pos_;
        break;
      }
      if (pos_ == before) malformed("expected whitespace before attribute", pos_);
      const std::size_t attr_at = pos_;
      std::string name = parse_name();
      skip_space();
      expect("=");
      skip_space();
      std::string value = parse_quoted(true);
      for (const auto& r : raw) {
        if (r.qname == name) malformed("duplicate attribute '" + name + "'", attr_at);
      }
      raw.push_back({std::move(name), std::move(value), attr_at});
    }

    XmlElement element;
    for (const auto& r : raw) {
      if (r.qname == "xmlns") {
        if (r.value == std::string(kXmlNamespace)) {
          malformed("cannot bind default namespace to the xml namespace", r.offset);
        }
        element.namespace_declarations[""] = r.value;
      } else if (r.qname.starts_with("xmlns:")) {
        const std::string prefix = r.qname.substr(6);
        if (!is_ncname(prefix)) malformed("bad namespace prefix", r.offset);
        if (r.value.empty()) malformed("empty namespace for prefix", r.offset);
        if (prefix == "xmlns") malformed("cannot declare the xmlns prefix", r.offset);
        if (prefix == "xml" && r.value != kXmlNamespace) {
          malformed("cannot rebind the xml prefix", r.offset);
        }
        if (prefix != "xml") element.namespace_declarations[prefix] = r.value;
      }
    }
    const NamespaceMap scope = scope_of(element, parent_scope);
    element.name = resolve(qname, scope, true, start);
    for (const auto& r : raw) {
      if (r.qname == "xmlns" || r.qname.starts_with("xmlns:")) continue;
      Attribute attr{resolve(r.qname, scope, false, r.offset), r.value};
      for (const auto& existing : element.attributes) {
        if (existing.name.same_as(attr.name)) {
          malformed("duplicate attribute '" + r.qname + "'", r.offset);
        }
      }
      element.attributes.push_back(std::move(attr));
    }
    if (empty) return element;

    std::string text;
    auto flush_text = [&] {
      if (!text.empty()) {
        element.children.emplace_back(std::move(text));
        text.clear();
      }
    };
    for (;;) {
      if (pos_ >= in_.size()) malformed("unclosed element '" + qname + "'", start);
      const char c = in_[pos_];
      if (c == '<') {
        if (at("</")) {
          flush_text();
          pos_ += 2;
          const std::size_t close_at = pos_;
          const std::string close = parse_name();
          if (close != qname) {
            malformed("mismatched end tag '" + close + "' for '" + qname + "'",
                      close_at);
          }
          skip_space();
          expect(">");
          return element;
        }
        reject_constructs();
        flush_text();
        element.children.emplace_back(parse_element(scope, depth + 1));
      } else if (c == '&') {
        parse_reference(text);
      } else {
        if (c == '>' && pos_ >= 2 && in_.compare(pos_ - 2, 2, "]]") == 0) {
          malformed("']]>' in character data", pos_);
        }
        text.push_back(c);
        ++pos_;
      }
    }
  }

  XmlName resolve(const std::string& qname, const NamespaceMap& scope,
                  bool is_element, std::size_t offset) {
    auto [prefix, local] = split_qname(qname);
    if (!is_ncname(local) || (!prefix.empty() && !is_ncname(prefix)) ||
        (qname.find(':') != std::string::npos && prefix.empty())) {
      malformed("bad qualified name '" + qname + "'", offset);
    }
    XmlName name;
    name.prefix = prefix;
    name.local = local;
    if (prefix == "xml") {
      name.namespace_uri = std::string(kXmlNamespace);
    } else if (!prefix.empty()) {
      auto it = scope.find(prefix);
      if (it == scope.end() || it->second.empty()) {
        malformed("unresolvable prefix '" + prefix + "'", offset);
      }
      name.namespace_uri = it->second;
    } else if (is_element) {
      if (auto it = scope.find(""); it != scope.end()) {
        name.namespace_uri = it->second;
      }
    }
    return name;
  }

  std::string in_;
  std::size_t pos_ = 0;
};

void escape_text(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#xD;"; break;
      default: out.push_back(c);
    }
  }
}

void escape_attribute(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '"': out += "&quot;"; break;
      case '\r': out += "&#xD;"; break;
      default: out.push_back(c);
    }
  }
}

void append_declaration(std::string& out, const std::string& prefix,
                        const std::string& uri) {
  out += prefix.empty() ? " xmlns=\"" : " xmlns:" + prefix + "=\"";
  escape_attribute(out, uri);
  out.push_back('"');
}

// Checks the namespace invariants that serialize relies on.
void check_element(const XmlElement& e, const NamespaceMap& parent_scope) {
  auto fail = [&](const std::string& why) {
    throw Error(Errc::kInvalidArgument,
                "element '" + e.name.qualified() + "': " + why);
  };
  if (!is_ncname(e.name.local)) fail("bad local name");
  const NamespaceMap scope = scope_of(e, parent_scope);
  auto check_name = [&](const XmlName& n, bool is_element) {
    if (n.prefix == "xml") {
      if (n.namespace_uri != kXmlNamespace) fail("xml prefix misbound");
      return;
    }
    if (!n.prefix.empty()) {
      if (!is_ncname(n.prefix)) fail("bad prefix '" + n.prefix + "'");
      auto it = scope.find(n.prefix);
      if (it == scope.end() || it->second != n.namespace_uri) {
        fail("prefix '" + n.prefix + "' does not resolve to '" +
             n.namespace_uri + "'");
      }
    } else if (is_element) {
      auto it = scope.find("");
      const std::string def = it == scope.end() ? "" : it->second;
      if (def != n.namespace_uri) fail("default namespace mismatch");
    } else if (!n.namespace_uri.empty()) {
      fail("namespaced attribute '" + n.local + "' needs a prefix");
    }
  };
  check_name(e.name, true);
  for (std::size_t i = 0; i < e.attributes.size(); ++i) {
    const auto& a = e.attributes[i];
    if (!is_ncname(a.name.local)) fail("bad attribute name");
    check_name(a.name, false);
    if (find_illegal_char(a.value) != std::string::npos) {
      fail("illegal character in attribute value");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (e.attributes[j].name.same_as(a.name)) {
        fail("duplicate attribute '" + a.name.qualified() + "'");
      }
    }
  }
  for (const auto& child : e.children) {
    if (child.is_element()) {
      check_element(child.element(), scope);
    } else if (find_illegal_char(child.text()) != std::string::npos) {
      fail("illegal character in text");
    }
  }
}

void serialize_element(std::string& out, const XmlElement& e) {
  const std::string qname = e.name.qualified();
  out.push_back('<');
  out += qname;
  for (const auto& [prefix, uri] : e.namespace_declarations) {
    append_declaration(out, prefix, uri);
  }
  for (const auto& a : e.attributes) {
    out.push_back(' ');
    out += a.name.qualified();
    out += "=\"";
    escape_attribute(out, a.value);
    out.push_back('"');
  }
  if (e.children.empty()) {
    out += "/>";
    return;
  }
  out.push_back('>');
  for (const auto& child : e.children) {
    if (child.is_element()) {
      serialize_element(out, child.element());
    } else {
      escape_text(out, child.text());
    }
  }
  out += "</";
  out += qname;
  out.push_back('>');
}

void canonicalize_element(std::string& out, const XmlElement& e,
                          const NamespaceMap& rendered,
                          const NamespaceMap& parent_scope) {
  const NamespaceMap scope = scope_of(e, parent_scope);
  const std::string qname = e.name.qualified();
  out.push_back('<');
  out += qname;
  // std::map iterates in prefix order with the default ("") first.
  for (const auto& [prefix, uri] : scope) {
    auto it = rendered.find(prefix);
    const std::string& previous = it == rendered.end() ? std::string() : it->second;
    if (previous != uri) append_declaration(out, prefix, uri);
  }
  std::vector<const Attribute*> attrs;
  attrs.reserve(e.attributes.size());
  for (const auto& a : e.attributes) attrs.push_back(&a);
  std::sort(attrs.begin(), attrs.end(), [](const Attribute* a, const Attribute* b) {
    return std::tie(a->name.namespace_uri, a->name.local) <
           std::tie(b->name.namespace_uri, b->name.local);
  });
  for (const Attribute* a : attrs) {
    out.push_back(' ');
    out += a->name.qualified();
    out += "=\"";
    escape_attribute(out, a->value);
    out.push_back('"');
  }
  out.push_back('>');
  for (const auto& child : e.children) {
    if (child.is_element()) {
      canonicalize_element(out, child.element(), scope, scope);
    } else {
      escape_text(out, child.text());
    }
  }
  out += "</";
  out += qname;
  out.push_back('>');
}

bool step_matches(const XmlName& step, const XmlName& name) {
  if (!step.namespace_uri.empty()) return step.same_as(name);
  return step.prefix == name.prefix && step.local == name.local;
}

}  // namespace

std::string XmlName::qualified() const {
  return prefix.empty() ? local : prefix + ":" + local;
}

bool is_ncname(std::string_view s) {
  if (s.empty() || !is_name_start(s[0]) || s[0] == ':') return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return is_name_char(c) && c != ':'; });
}

XmlElement& XmlElement::add_child(XmlElement child) {
  children.emplace_back(std::move(child));
  return children.back().element();
}

XmlElement& XmlElement::add_text(std::string text) {
  children.emplace_back(std::move(text));
  return *this;
}

XmlElement& XmlElement::set_attribute(XmlName attr_name, std::string value) {
  for (auto& a : attributes) {
    if (a.name.same_as(attr_name)) {
      a.value = std::move(value);
      return *this;
    }
  }
  attributes.push_back({std::move(attr_name), std::move(value)});
  return *this;
}

XmlElement& XmlElement::declare_namespace(std::string prefix, std::string uri) {
  namespace_declarations[std::move(prefix)] = std::move(uri);
  return *this;
}

std::optional<std::string> XmlElement::attribute(std::string_view ns,
                                                 std::string_view local) const {
  for (const auto& a : attributes) {
    if (a.name.same_as(ns, local)) return a.value;
  }
  return std::nullopt;
}

std::vector<const XmlElement*> XmlElement::child_elements() const {
  std::vector<const XmlElement*> out;
  for (const auto& c : children) {
    if (c.is_element()) out.push_back(&c.element());
  }
  return out;
}

std::vector<XmlElement*> XmlElement::child_elements() {
  std::vector<XmlElement*> out;
  for (auto& c : children) {
    if (c.is_element()) out.push_back(&c.element());
  }
  return out;
}

const XmlElement* XmlElement::find_child(std::string_view ns,
                                         std::string_view local) const {
  for (const auto& c : children) {
    if (c.is_element() && c.element().name.same_as(ns, local)) {
      return &c.element();
    }
  }
  return nullptr;
}

std::string XmlElement::text() const {
  std::string out;
  for (const auto& c : children) {
    if (c.is_text()) out += c.text();
  }
  return out;
}

std::string XmlElement::string_value() const {
  std::string out;
  for (const auto& c : children) {
    out += c.is_text() ? c.text() : c.element().string_value();
  }
  return out;
}

bool XmlElement::has_significant_text() const {
  return std::any_of(children.begin(), children.end(), [](const XmlNode& c) {
    return c.is_text() && !is_xml_whitespace(c.text());
  });
}

bool XmlElement::operator==(const XmlElement& other) const {
  return name == other.name && attributes == other.attributes &&
         namespace_declarations == other.namespace_declarations &&
         children == other.children;
}

NodePath NodePath::parse(std::string_view text) {
  if (!text.starts_with("#/")) {
    throw Error(Errc::kInvalidArgument,
                "node path must start with '#/': '" + std::string(text) + "'");
  }
  NodePath path;
  std::string_view rest = text.substr(2);
  while (!rest.empty()) {
    const auto slash = rest.find('/');
    const std::string_view step = rest.substr(0, slash);
    auto [prefix, local] = split_qname(step);
    if (!is_ncname(local) || (!prefix.empty() && !is_ncname(prefix)) ||
        (step.find(':') != std::string_view::npos && prefix.empty())) {
      throw Error(Errc::kInvalidArgument,
                  "bad node path step '" + std::string(step) + "'");
    }
    path.steps.push_back(XmlName{"", prefix, local});
    if (slash == std::string_view::npos) break;
    rest = rest.substr(slash + 1);
    if (rest.empty()) {
      throw Error(Errc::kInvalidArgument, "trailing '/' in node path");
    }
  }
  return path;
}

std::string NodePath::to_string() const {
  std::string out = "#/";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out.push_back('/');
    out += steps[i].qualified();
  }
  return out;
}

XmlDocument parse(std::span<const std::uint8_t> bytes) {
  return parse(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                bytes.size()));
}

XmlDocument parse(std::string_view text) {
  Parser parser{std::string(text)};
  return parser.parse_document();
}

Bytes serialize(const XmlDocument& doc) {
  const std::string s = serialize_to_string(doc);
  return Bytes(s.begin(), s.end());
}

std::string serialize_to_string(const XmlDocument& doc) {
  check_element(doc.root, NamespaceMap{});
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  serialize_element(out, doc.root);
  out.push_back('\n');
  return out;
}

Bytes canonicalize(const XmlElement& element, const NamespaceMap& inherited_ns) {
  std::string out;
  canonicalize_element(out, element, NamespaceMap{}, inherited_ns);
  return Bytes(out.begin(), out.end());
}

const XmlElement& select(const XmlDocument& doc, const NodePath& path) {
  return *select_scoped(doc.root, NamespaceMap{}, path).element;
}

Selection select_scoped(const XmlElement& root, const NamespaceMap& root_scope,
                        const NodePath& path) {
  const XmlElement* current = &root;
  NamespaceMap inherited = root_scope;
  for (const auto& step : path.steps) {
    const XmlElement* next = nullptr;
    for (const auto& c : current->children) {
      if (c.is_element() && step_matches(step, c.element().name)) {
        next = &c.element();
        break;
      }
    }
    if (!next) {
      throw Error(Errc::kNodeNotFound, "no child '" + step.qualified() +
                                           "' under '" +
                                           current->name.qualified() + "'");
    }
    inherited = scope_of(*current, inherited);
    current = next;
  }
  return Selection{current, std::move(inherited)};
}

NamespaceMap scope_of(const XmlElement& element, const NamespaceMap& inherited) {
  NamespaceMap scope = inherited;
  for (const auto& [prefix, uri] : element.namespace_declarations) {
    scope[prefix] = uri;
  }
  return scope;
}

void indent(XmlElement& element, int depth, int width) {
  if (element.children.empty() || element.has_significant_text()) return;
  std::vector<XmlNode> rebuilt;
  const std::string inner = "\n" + std::string((depth + 1) * width, ' ');
  for (auto& c : element.children) {
    if (!c.is_element()) continue;
    indent(c.element(), depth + 1, width);
    rebuilt.emplace_back(inner);
    rebuilt.push_back(std::move(c));
  }
  rebuilt.emplace_back("\n" + std::string(depth * width, ' '));
  element.children = std::move(rebuilt);
}

bool is_xml_whitespace(std::string_view s) {
  return std::all_of(s.begin(), s.end(), is_space);
}

std::string_view trim_xml_whitespace(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

}  // namespace sigdoc::xml
