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

#ifndef SIGDOC_ERROR_HPP_
#define SIGDOC_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sigdoc {

enum class Errc {
  // canonical_xml
  kMalformedXml,
  kUnsupportedEncoding,
  kUnsupportedConstruct,
  kNodeNotFound,
  // sigcore
  kUnknownAlgorithm,
  kKeyMismatch,
  kMalformedKey,
  kMalformedBase64,
  // xmldsig
  kMalformedSignature,
  kUnresolvableReference,
  // schema
  kMalformedDefinition,
  kSchemaTooRich,
  kInvalidTypeId,
  // transform
  kUnsupportedStylesheet,
  kMatchFailure,
  kMissingField,
  kMalformedTransformData,
  // edoc
  kMalformedEDocument,
  kUnknownField,
  kValueRejected,
  // repository
  kDuplicateId,
  kSignatureInvalid,
  kStorageFailure,
  kNotFound,
  kCorruptEntry,
  kAmbiguousNamespace,
  // caller broke a documented precondition
  kInvalidArgument,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sigdoc

#endif  // SIGDOC_ERROR_HPP_
