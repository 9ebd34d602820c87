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

#include "sigdoc/error.hpp"

namespace sigdoc {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kMalformedXml: return "MalformedXml";
    case Errc::kUnsupportedEncoding: return "UnsupportedEncoding";
    case Errc::kUnsupportedConstruct: return "UnsupportedConstruct";
    case Errc::kNodeNotFound: return "NodeNotFound";
    case Errc::kUnknownAlgorithm: return "UnknownAlgorithm";
    case Errc::kKeyMismatch: return "KeyMismatch";
    case Errc::kMalformedKey: return "MalformedKey";
    case Errc::kMalformedBase64: return "MalformedBase64";
    case Errc::kMalformedSignature: return "MalformedSignature";
    case Errc::kUnresolvableReference: return "UnresolvableReference";
    case Errc::kMalformedDefinition: return "MalformedDefinition";
    case Errc::kSchemaTooRich: return "SchemaTooRich";
    case Errc::kInvalidTypeId: return "InvalidTypeId";
    case Errc::kUnsupportedStylesheet: return "UnsupportedStylesheet";
    case Errc::kMatchFailure: return "MatchFailure";
    case Errc::kMissingField: return "MissingField";
    case Errc::kMalformedTransformData: return "MalformedTransformData";
    case Errc::kMalformedEDocument: return "MalformedEDocument";
    case Errc::kUnknownField: return "UnknownField";
    case Errc::kValueRejected: return "ValueRejected";
    case Errc::kDuplicateId: return "DuplicateId";
    case Errc::kSignatureInvalid: return "SignatureInvalid";
    case Errc::kStorageFailure: return "StorageFailure";
    case Errc::kNotFound: return "NotFound";
    case Errc::kCorruptEntry: return "CorruptEntry";
    case Errc::kAmbiguousNamespace: return "AmbiguousNamespace";
    case Errc::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace sigdoc
