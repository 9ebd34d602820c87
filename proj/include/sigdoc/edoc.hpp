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

// The aida:eDocument envelope: one aida:signedContent followed by parallel
// dsig:Signature elements over it. Also instance construction and the
// four-step check of an instance against its stored definition.

#ifndef SIGDOC_EDOC_HPP_
#define SIGDOC_EDOC_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sigdoc/crypto.hpp"
#include "sigdoc/dsig.hpp"
#include "sigdoc/error.hpp"
#include "sigdoc/schema.hpp"
#include "sigdoc/xml.hpp"

namespace sigdoc::edoc {

using Bytes = crypto::Bytes;

inline constexpr std::string_view kEDocNamespace = dsig::kAidaNamespace;

struct EDocument {
  // aida:signedContent exactly as signed, layout whitespace included.
  xml::XmlElement signed_content;
  std::vector<dsig::XmlSignature> signatures;

  // The single element inside aida:signedContent.
  const xml::XmlElement& payload() const;

  bool operator==(const EDocument&) const = default;
};

struct SignedProperties {
  std::optional<std::string> transform_data_id;
  // Over the canonical signedContent, with the references' digest algorithm.
  std::optional<crypto::Digest> document_hash;
  // Children this code does not interpret, kept in order.
  std::vector<xml::XmlElement> other;

  bool operator==(const SignedProperties&) const = default;
};

struct UnsignedProperties {
  // Opaque, supplied by the caller after signing.
  std::optional<Bytes> signature_value_timestamp;
  std::vector<xml::XmlElement> other;

  bool operator==(const UnsignedProperties&) const = default;
};

xml::XmlElement to_element(const SignedProperties& props);
xml::XmlElement to_element(const UnsignedProperties& props);
// Throws Errc::kMalformedSignature. `hash_algorithm` types documentHash.
SignedProperties signed_properties_from(const xml::XmlElement& element,
                                        const crypto::AlgorithmId& hash_algorithm);
UnsignedProperties unsigned_properties_from(const xml::XmlElement& element);

SignedProperties signed_properties_of(const dsig::XmlSignature& sig);
UnsignedProperties unsigned_properties_of(const dsig::XmlSignature& sig);

// aida:signedContent laid out around a payload indented for depth 2.
xml::XmlElement wrap_content(const xml::XmlElement& payload);

// Bindings in scope at aida:signedContent inside an emitted envelope.
const xml::NamespaceMap& content_scope();

// Digest of the canonical signedContent.
crypto::Digest document_hash(const xml::XmlElement& signed_content,
                             const crypto::AlgorithmId& digest);

// Digest used for references by the key's signature algorithm.
crypto::AlgorithmId reference_digest_for(const crypto::KeyPair& key);

EDocument wrap_and_sign(const xml::XmlElement& payload, const crypto::KeyPair& key,
                        const Bytes& certificate, const SignedProperties& props,
                        const UnsignedProperties& unsigned_props);

// wrap_and_sign with signedProperties naming a transform and carrying the
// document hash.
EDocument sign_instance(const xml::XmlElement& payload, const crypto::KeyPair& key,
                        const Bytes& certificate,
                        const std::optional<std::string>& transform_data_id,
                        const UnsignedProperties& unsigned_props = {});

// Appends a parallel signature over the same signedContent.
EDocument countersign(const EDocument& edoc, const crypto::KeyPair& key,
                      const Bytes& certificate, const SignedProperties& props,
                      const UnsignedProperties& unsigned_props);

// Replaces the unsigned properties of one signature. The signature stays
// valid.
EDocument with_unsigned_properties(const EDocument& edoc, std::size_t index,
                                   const UnsignedProperties& unsigned_props);

// Throws Errc::kMalformedEDocument for an empty signature list.
xml::XmlDocument emit_edoc(const EDocument& edoc);

// Throws Errc::kMalformedEDocument or Errc::kMalformedSignature.
EDocument parse_edoc(const xml::XmlDocument& doc);

class ValueRejected : public Error {
 public:
  explicit ValueRejected(schema::ValidationReport report);
  const schema::ValidationReport& report() const { return report_; }

 private:
  schema::ValidationReport report_;
};

// Builds and validates an instance, indented for `depth`. Throws
// Errc::kUnknownField, Errc::kMissingField or ValueRejected.
xml::XmlElement make_instance(const schema::DocumentTypeDefinition& def,
                              const std::map<std::string, std::string>& values,
                              int depth = 0);

// Flat "field=value" lines. Blank lines are skipped; a value runs to the end
// of its line and may contain '='. Throws Errc::kInvalidArgument for a line
// without '=' or a repeated field.
std::map<std::string, std::string> parse_field_values(std::string_view text);

// One report per signature, in order. A documentHash that disagrees with the
// content fails its signature.
std::vector<dsig::VerificationReport> verify_edoc(const EDocument& edoc);
// True when there is at least one signature and all verify.
bool all_valid(const std::vector<dsig::VerificationReport>& reports);

// Where pipeline_verify finds definitions.
class DefinitionLookup {
 public:
  virtual ~DefinitionLookup() = default;
  // Throws Errc::kNotFound, Errc::kAmbiguousNamespace or
  // Errc::kCorruptEntry.
  virtual EDocument find_definition_by_namespace(
      const std::string& namespace_uri) const = 0;
};

enum class StepOutcome { kPass, kFail, kSkipped };

std::string_view outcome_name(StepOutcome outcome);

struct PipelineStep {
  std::string name;
  StepOutcome outcome = StepOutcome::kSkipped;
  std::string detail;
};

inline constexpr std::string_view kFetchDefinition = "fetch-definition";
inline constexpr std::string_view kVerifyDefinitionSignature =
    "verify-definition-signature";
inline constexpr std::string_view kValidateStructure = "validate-structure";
inline constexpr std::string_view kVerifyInstanceSignature =
    "verify-instance-signature";

struct PipelineReport {
  std::vector<PipelineStep> steps;
  bool overall = false;

  const PipelineStep& step(std::string_view name) const;
  // "<step> PASS|FAIL|SKIPPED[: detail]", one line per step.
  std::string to_text() const;
};

// Never throws for bad input; every failure lands in the report.
PipelineReport pipeline_verify(const EDocument& instance,
                               const DefinitionLookup& definitions);

}  // namespace sigdoc::edoc

#endif  // SIGDOC_EDOC_HPP_
