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

#include <algorithm>
#include <utility>

namespace sigdoc::edoc {

using xml::XmlElement;
using xml::XmlName;
using xml::XmlNode;

namespace {

const std::string kAida(kEDocNamespace);

XmlName aida(std::string_view local) { return XmlName{kAida, "aida", std::string(local)}; }

[[noreturn]] void malformed(const std::string& what) {
  throw Error(Errc::kMalformedEDocument, what);
}

[[noreturn]] void bad_properties(const std::string& what) {
  throw Error(Errc::kMalformedSignature, what);
}

void expect_properties_element(const XmlElement& e, std::string_view local) {
  if (!e.name.same_as(kAida, local)) {
    bad_properties("expected aida:" + std::string(local) + ", got '" +
                   e.name.qualified() + "'");
  }
  if (e.has_significant_text()) {
    bad_properties("text directly inside aida:" + std::string(local));
  }
}

Bytes decode_base64_text(const XmlElement& e) {
  if (!e.child_elements().empty()) {
    bad_properties(e.name.qualified() + " must hold only text");
  }
  std::string text = e.text();
  std::erase_if(text, [](char c) { return xml::is_xml_whitespace(std::string_view(&c, 1)); });
  try {
    return crypto::base64_decode(text);
  } catch (const Error& err) {
    bad_properties(e.name.qualified() + ": " + err.what());
  }
}

const crypto::AlgorithmId& content_digest_method(const dsig::XmlSignature& sig) {
  if (const dsig::Reference* r = sig.signed_info.find(dsig::kSignedContentUri)) {
    return r->digest_method;
  }
  if (sig.signed_info.references.empty()) {
    bad_properties("signature has no references");
  }
  return sig.signed_info.references.front().digest_method;
}

dsig::XmlSignature sign_content(const XmlElement& signed_content,
                                const crypto::KeyPair& key, const Bytes& certificate,
                                const SignedProperties& props,
                                const UnsignedProperties& unsigned_props) {
  return dsig::sign_enveloping(
      signed_content, key, certificate, to_element(props), to_element(unsigned_props),
      dsig::ContentTarget{std::string(dsig::kSignedContentUri), content_scope()});
}

}  // namespace

const XmlElement& EDocument::payload() const {
  const auto kids = signed_content.child_elements();
  if (kids.size() != 1) malformed("aida:signedContent must hold one element");
  return *kids.front();
}

XmlElement to_element(const SignedProperties& props) {
  XmlElement e(aida("signedProperties"));
  if (props.transform_data_id) {
    e.add_child(XmlElement(aida("transformDataID"))).add_text(*props.transform_data_id);
  }
  if (props.document_hash) {
    e.add_child(XmlElement(aida("documentHash")))
        .add_text(crypto::base64_encode(props.document_hash->value));
  }
  for (const auto& o : props.other) e.add_child(o);
  return e;
}

XmlElement to_element(const UnsignedProperties& props) {
  XmlElement e(aida("unsignedProperties"));
  if (props.signature_value_timestamp) {
    e.add_child(XmlElement(aida("signatureValueTimeStamp")))
        .add_text(crypto::base64_encode(*props.signature_value_timestamp));
  }
  for (const auto& o : props.other) e.add_child(o);
  return e;
}

SignedProperties signed_properties_from(const XmlElement& element,
                                        const crypto::AlgorithmId& hash_algorithm) {
  expect_properties_element(element, "signedProperties");
  SignedProperties props;
  for (const XmlElement* c : element.child_elements()) {
    if (c->name.same_as(kAida, "transformDataID")) {
      if (props.transform_data_id) bad_properties("duplicate aida:transformDataID");
      if (!c->child_elements().empty()) {
        bad_properties("aida:transformDataID must hold only text");
      }
      props.transform_data_id = std::string(xml::trim_xml_whitespace(c->text()));
    } else if (c->name.same_as(kAida, "documentHash")) {
      if (props.document_hash) bad_properties("duplicate aida:documentHash");
      crypto::Digest d{hash_algorithm, decode_base64_text(*c)};
      const auto& info = crypto::AlgorithmRegistry::instance().lookup(
          hash_algorithm.uri, crypto::AlgorithmKind::kDigest);
      if (d.value.size() != info.digest_size) {
        bad_properties("aida:documentHash has the wrong length");
      }
      props.document_hash = std::move(d);
    } else {
      props.other.push_back(*c);
    }
  }
  return props;
}

UnsignedProperties unsigned_properties_from(const XmlElement& element) {
  expect_properties_element(element, "unsignedProperties");
  UnsignedProperties props;
  for (const XmlElement* c : element.child_elements()) {
    if (c->name.same_as(kAida, "signatureValueTimeStamp")) {
      if (props.signature_value_timestamp) {
        bad_properties("duplicate aida:signatureValueTimeStamp");
      }
      props.signature_value_timestamp = decode_base64_text(*c);
    } else {
      props.other.push_back(*c);
    }
  }
  return props;
}

SignedProperties signed_properties_of(const dsig::XmlSignature& sig) {
  return signed_properties_from(sig.signed_properties, content_digest_method(sig));
}

UnsignedProperties unsigned_properties_of(const dsig::XmlSignature& sig) {
  return unsigned_properties_from(sig.unsigned_properties);
}

XmlElement wrap_content(const XmlElement& payload) {
  XmlElement e(aida("signedContent"));
  e.add_text("\n    ");
  e.add_child(payload);
  e.add_text("\n  ");
  return e;
}

const xml::NamespaceMap& content_scope() {
  static const xml::NamespaceMap scope{{"aida", kAida},
                                       {"xsi", std::string(schema::kXsiNamespace)}};
  return scope;
}

crypto::Digest document_hash(const XmlElement& signed_content,
                             const crypto::AlgorithmId& digest) {
  return crypto::digest(xml::canonicalize(signed_content, content_scope()), digest);
}

crypto::AlgorithmId reference_digest_for(const crypto::KeyPair& key) {
  return crypto::AlgorithmRegistry::instance()
      .lookup(key.algorithm.uri, crypto::AlgorithmKind::kSignature)
      .reference_digest;
}

EDocument wrap_and_sign(const XmlElement& payload, const crypto::KeyPair& key,
                        const Bytes& certificate, const SignedProperties& props,
                        const UnsignedProperties& unsigned_props) {
  EDocument e;
  e.signed_content = wrap_content(payload);
  e.signatures.push_back(
      sign_content(e.signed_content, key, certificate, props, unsigned_props));
  return e;
}

EDocument sign_instance(const XmlElement& payload, const crypto::KeyPair& key,
                        const Bytes& certificate,
                        const std::optional<std::string>& transform_data_id,
                        const UnsignedProperties& unsigned_props) {
  EDocument e;
  e.signed_content = wrap_content(payload);
  SignedProperties props;
  props.transform_data_id = transform_data_id;
  props.document_hash = document_hash(e.signed_content, reference_digest_for(key));
  e.signatures.push_back(
      sign_content(e.signed_content, key, certificate, props, unsigned_props));
  return e;
}

EDocument countersign(const EDocument& edoc, const crypto::KeyPair& key,
                      const Bytes& certificate, const SignedProperties& props,
                      const UnsignedProperties& unsigned_props) {
  EDocument e = edoc;
  e.signatures.push_back(
      sign_content(e.signed_content, key, certificate, props, unsigned_props));
  return e;
}

EDocument with_unsigned_properties(const EDocument& edoc, std::size_t index,
                                   const UnsignedProperties& unsigned_props) {
  if (index >= edoc.signatures.size()) {
    throw Error(Errc::kInvalidArgument, "no signature #" + std::to_string(index));
  }
  EDocument e = edoc;
  XmlElement up = to_element(unsigned_props);
  xml::indent(up, 4);
  e.signatures[index].unsigned_properties = std::move(up);
  return e;
}

xml::XmlDocument emit_edoc(const EDocument& edoc) {
  if (edoc.signatures.empty()) malformed("an e-document needs a signature");
  XmlElement root(aida("eDocument"));
  for (const auto& [prefix, uri] : content_scope()) root.declare_namespace(prefix, uri);
  root.set_attribute(
      XmlName{std::string(schema::kXsiNamespace), "xsi", "schemaLocation"},
      kAida + " aida:eDocument");
  root.add_text("\n  ");
  root.add_child(edoc.signed_content);
  for (const auto& sig : edoc.signatures) {
    root.add_text("\n  ");
    root.add_child(dsig::emit(sig));
  }
  root.add_text("\n");
  return xml::XmlDocument{std::move(root), "UTF-8"};
}

EDocument parse_edoc(const xml::XmlDocument& doc) {
  const XmlElement& root = doc.root;
  if (!root.name.same_as(kAida, "eDocument")) {
    malformed("expected aida:eDocument, got '" + root.name.qualified() + "'");
  }
  if (root.namespace_declarations != content_scope()) {
    malformed("aida:eDocument must declare exactly the aida and xsi prefixes");
  }
  if (root.has_significant_text()) malformed("text directly inside aida:eDocument");

  const auto kids = root.child_elements();
  if (kids.empty() || !kids[0]->name.same_as(kAida, "signedContent")) {
    malformed("the first child must be aida:signedContent");
  }
  if (kids.size() < 2) malformed("no dsig:Signature");

  EDocument e;
  e.signed_content = *kids[0];
  if (e.signed_content.has_significant_text() ||
      e.signed_content.child_elements().size() != 1) {
    malformed("aida:signedContent must hold one element");
  }
  for (std::size_t i = 1; i < kids.size(); ++i) {
    if (!kids[i]->name.same_as(dsig::kDsigNamespace, "Signature")) {
      malformed("unexpected '" + kids[i]->name.qualified() + "' after signedContent");
    }
    dsig::XmlSignature sig = dsig::absorb(*kids[i]);
    if (!sig.signed_info.find(dsig::kSignedContentUri)) {
      malformed("signature #" + std::to_string(i - 1) +
                " does not cover aida:signedContent");
    }
    e.signatures.push_back(std::move(sig));
  }
  return e;
}

ValueRejected::ValueRejected(schema::ValidationReport report)
    : Error(Errc::kValueRejected, report.summary()), report_(std::move(report)) {}

XmlElement make_instance(const schema::DocumentTypeDefinition& def,
                         const std::map<std::string, std::string>& values,
                         int depth) {
  const schema::CompiledSchema& s = def.schema();
  for (const auto& [name, value] : values) {
    if (!s.find(name)) {
      throw Error(Errc::kUnknownField,
                  "'" + name + "' is not a field of " + def.type_id().value());
    }
  }
  XmlElement root(XmlName{s.target_namespace, s.namespace_prefix, s.root_element});
  root.declare_namespace(s.namespace_prefix, s.target_namespace);
  root.declare_namespace("xsi", std::string(schema::kXsiNamespace));
  root.set_attribute(
      XmlName{std::string(schema::kXsiNamespace), "xsi", "schemaLocation"},
      s.target_namespace + " " + def.type_id().value());
  for (const auto& f : s.fields) {
    auto it = values.find(f.name);
    if (it == values.end()) {
      throw Error(Errc::kMissingField, "no value for field '" + f.name + "'");
    }
    XmlElement& field =
        root.add_child(XmlElement(XmlName{s.target_namespace, s.namespace_prefix, f.name}));
    if (!it->second.empty()) field.add_text(it->second);
  }
  xml::indent(root, depth);
  schema::ValidationReport report = schema::validate_instance(root, def);
  if (!report.valid()) throw ValueRejected(std::move(report));
  return root;
}

std::map<std::string, std::string> parse_field_values(std::string_view text) {
  std::map<std::string, std::string> out;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(Errc::kInvalidArgument,
                  "line " + std::to_string(line_no) + ": expected field=value");
    }
    std::string name(line.substr(0, eq));
    if (!out.emplace(name, std::string(line.substr(eq + 1))).second) {
      throw Error(Errc::kInvalidArgument,
                  "line " + std::to_string(line_no) + ": '" + name + "' given twice");
    }
  }
  return out;
}

std::vector<dsig::VerificationReport> verify_edoc(const EDocument& edoc) {
  const xml::XmlDocument host = emit_edoc(edoc);
  const dsig::Resolver resolve = dsig::document_resolver(host);
  std::vector<dsig::VerificationReport> out;
  for (const auto& sig : edoc.signatures) {
    dsig::VerificationReport r = dsig::verify_signature(sig, resolve);
    try {
      const SignedProperties props = signed_properties_of(sig);
      if (props.document_hash &&
          document_hash(edoc.signed_content, props.document_hash->algorithm) !=
              *props.document_hash) {
        r.signature_valid = false;
        r.failure_reason = "documentHash does not match aida:signedContent";
      }
    } catch (const Error& err) {
      r.signature_valid = false;
      r.failure_reason = err.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

bool all_valid(const std::vector<dsig::VerificationReport>& reports) {
  return !reports.empty() &&
         std::all_of(reports.begin(), reports.end(),
                     [](const auto& r) { return r.signature_valid; });
}

std::string_view outcome_name(StepOutcome outcome) {
  switch (outcome) {
    case StepOutcome::kPass: return "PASS";
    case StepOutcome::kFail: return "FAIL";
    case StepOutcome::kSkipped: return "SKIPPED";
  }
  return "?";
}

const PipelineStep& PipelineReport::step(std::string_view name) const {
  for (const auto& s : steps) {
    if (s.name == name) return s;
  }
  throw Error(Errc::kInvalidArgument, "no step '" + std::string(name) + "'");
}

std::string PipelineReport::to_text() const {
  std::string out;
  for (const auto& s : steps) {
    out += s.name + " " + std::string(outcome_name(s.outcome));
    if (!s.detail.empty()) out += ": " + s.detail;
    out += "\n";
  }
  return out;
}

namespace {

std::string first_failure(const std::vector<dsig::VerificationReport>& reports) {
  if (reports.empty()) return "no signatures";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (!reports[i].signature_valid) {
      return "signature #" + std::to_string(i) + ": " +
             reports[i].failure_reason.value_or("invalid");
    }
  }
  return {};
}

}  // namespace

PipelineReport pipeline_verify(const EDocument& instance,
                               const DefinitionLookup& definitions) {
  PipelineReport report;
  for (auto name : {kFetchDefinition, kVerifyDefinitionSignature, kValidateStructure,
                    kVerifyInstanceSignature}) {
    report.steps.push_back({std::string(name), StepOutcome::kSkipped, ""});
  }
  std::size_t at = 0;
  // Runs one step; false stops the chain.
  auto run = [&](auto&& body) {
    PipelineStep& s = report.steps[at++];
    try {
      std::optional<std::string> failure = body(s.detail);
      s.outcome = failure ? StepOutcome::kFail : StepOutcome::kPass;
      if (failure) s.detail = *failure;
    } catch (const std::exception& err) {
      s.outcome = StepOutcome::kFail;
      s.detail = err.what();
    }
    return s.outcome == StepOutcome::kPass;
  };

  std::optional<EDocument> definition_edoc;
  std::optional<schema::DocumentTypeDefinition> definition;
  const bool ok =
      run([&](std::string& detail) -> std::optional<std::string> {
        const std::string ns = instance.payload().name.namespace_uri;
        definition_edoc = definitions.find_definition_by_namespace(ns);
        detail = "definition for " + ns;
        return std::nullopt;
      }) &&
      run([&](std::string& detail) -> std::optional<std::string> {
        const auto reports = verify_edoc(*definition_edoc);
        if (!all_valid(reports)) return first_failure(reports);
        detail = std::to_string(reports.size()) + " signature(s) valid";
        return std::nullopt;
      }) &&
      run([&](std::string& detail) -> std::optional<std::string> {
        definition = schema::parse_type_definition(definition_edoc->payload());
        const schema::ValidationReport r =
            schema::validate_instance(instance.payload(), *definition);
        if (!r.valid()) return r.summary();
        detail = "conforms to " + definition->type_id().value();
        return std::nullopt;
      }) &&
      run([&](std::string& detail) -> std::optional<std::string> {
        const auto reports = verify_edoc(instance);
        if (!all_valid(reports)) return first_failure(reports);
        detail = std::to_string(reports.size()) + " signature(s) valid";
        return std::nullopt;
      });
  report.overall = ok;
  return report;
}

}  // namespace sigdoc::edoc
