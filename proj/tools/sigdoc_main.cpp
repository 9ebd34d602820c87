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

// sigdoc: author, sign, store, instantiate, verify and render e-documents.
//
//   sigdoc keygen --out KEY [--cert-out CERT] [--algorithm rsa-sha1] [--size 2048]
//   sigdoc compile GENERIC --type-id ID [-o OUT]
//   sigdoc sign FILE --kind definition|transform|instance --key K --cert C [-o OUT]
//              [--transform-id T] [--type-id ID]
//   sigdoc store EDOC --kind K [--id ID] --repo R
//   sigdoc fetch --kind K --id ID --repo R [-o OUT]
//   sigdoc list --kind K --repo R
//   sigdoc instantiate --type-id ID --values F --transform-id T --key K --cert C --repo R
//   sigdoc verify EDOC --repo R [--report-format text|lines]
//   sigdoc render EDOC --repo R -o OUT
//
// Diagnostics go to stderr; exit status is 0 only on full success.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sigdoc/crypto.hpp"
#include "sigdoc/edoc.hpp"
#include "sigdoc/error.hpp"
#include "sigdoc/repository.hpp"
#include "sigdoc/schema.hpp"
#include "sigdoc/transform.hpp"
#include "sigdoc/xml.hpp"

namespace {

using sigdoc::Errc;
using sigdoc::Error;
namespace crypto = sigdoc::crypto;
namespace edoc = sigdoc::edoc;
namespace repository = sigdoc::repository;
namespace schema = sigdoc::schema;
namespace transform = sigdoc::transform;
namespace xml = sigdoc::xml;

constexpr int kFailure = 1;

struct Options {
  std::string repo = "sigdoc-repo";
  std::string key;
  std::string cert;
  std::string report_format = "text";

  std::string input;
  std::string output;
  std::string kind;
  std::string id;
  std::string type_id;
  std::string values;
  std::string transform_id;

  std::string cert_out;
  std::string algorithm = "rsa-sha1";
  int size = 2048;
  std::optional<std::uint64_t> seed;
  std::string subject = "sigdoc signer";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kInvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())) ||
      !out.flush()) {
    throw Error(Errc::kInvalidArgument, "cannot write '" + path + "'");
  }
}

// To the named file, or stdout when none is given.
void emit_output(const Options& o, const std::string& bytes) {
  if (o.output.empty()) {
    std::cout << bytes;
  } else {
    write_file(o.output, bytes);
  }
}

xml::XmlDocument read_xml(const std::string& path) { return xml::parse(read_file(path)); }

crypto::KeyPair load_key(const Options& o) {
  if (o.key.empty()) throw Error(Errc::kInvalidArgument, "--key is required");
  return crypto::key_pair_from_pem(read_file(o.key));
}

crypto::Bytes load_cert(const Options& o) {
  if (o.cert.empty()) return {};  // bare public key in KeyInfo
  const std::string pem = read_file(o.cert);
  return crypto::certificate_from_file_bytes(
      crypto::Bytes(pem.begin(), pem.end()));
}

repository::EntryKind entry_kind(const Options& o) {
  if (o.kind.empty()) throw Error(Errc::kInvalidArgument, "--kind is required");
  return repository::kind_from_name(o.kind);
}

std::string serialized(const edoc::EDocument& e) {
  return xml::serialize_to_string(edoc::emit_edoc(e));
}

int cmd_keygen(const Options& o) {
  const auto& info = crypto::AlgorithmRegistry::instance().lookup_alias(o.algorithm);
  std::unique_ptr<crypto::RandomSource> random;
  if (o.seed) {
    random = std::make_unique<crypto::SeededRandom>(*o.seed);
  } else {
    random = std::make_unique<crypto::SystemRandom>();
  }
  const crypto::KeyPair key = crypto::generate_keypair(info.id, o.size, *random);
  const crypto::Bytes cert = crypto::make_self_signed_certificate(key, o.subject, *random);
  write_file(o.output, crypto::key_pair_to_pem(key));
  write_file(o.cert_out.empty() ? o.output + ".crt" : o.cert_out,
             crypto::certificate_to_pem(cert));
  return 0;
}

int cmd_compile(const Options& o) {
  const auto generic = schema::parse_generic(read_xml(o.input));
  const auto def = schema::compile(generic, schema::DocumentTypeId(o.type_id));
  emit_output(o, xml::serialize_to_string(schema::emit_type_definition(def)));
  return 0;
}

int cmd_sign(const Options& o) {
  const repository::EntryKind kind = entry_kind(o);
  const crypto::KeyPair key = load_key(o);
  const crypto::Bytes cert = load_cert(o);
  const xml::XmlDocument doc = read_xml(o.input);
  edoc::EDocument signed_doc;
  switch (kind) {
    case repository::EntryKind::kDefinition: {
      const auto def = schema::parse_type_definition(doc);
      signed_doc = edoc::wrap_and_sign(schema::emit_type_definition_element(def, 2), key,
                                       cert, {}, {});
      break;
    }
    case repository::EntryKind::kTransform: {
      // A bare stylesheet is wrapped here; a transformData file is taken as is.
      transform::TransformData t;
      if (doc.root.name.namespace_uri == transform::kXslNamespace) {
        if (o.transform_id.empty() || o.type_id.empty()) {
          throw Error(Errc::kInvalidArgument,
                      "a bare stylesheet needs --transform-id and --type-id");
        }
        t.transform_id = o.transform_id;
        t.document_type_id = schema::DocumentTypeId(o.type_id);
        t.stylesheet = transform::parse_stylesheet(doc);
      } else {
        t = transform::parse_transform_data(doc);
      }
      signed_doc = edoc::wrap_and_sign(transform::emit_transform_data_element(t, 2),
                                       key, cert, {}, {});
      break;
    }
    case repository::EntryKind::kInstance: {
      std::optional<std::string> tid;
      if (!o.transform_id.empty()) tid = o.transform_id;
      signed_doc = edoc::sign_instance(doc.root, key, cert, tid);
      break;
    }
  }
  emit_output(o, serialized(signed_doc));
  return 0;
}

int cmd_store(const Options& o) {
  repository::Repository repo(o.repo);
  const repository::EntryKind kind = entry_kind(o);
  const edoc::EDocument e = edoc::parse_edoc(read_xml(o.input));
  std::optional<std::string> id;
  if (!o.id.empty()) id = o.id;
  std::cout << repo.store(kind, e, id) << "\n";
  return 0;
}

int cmd_fetch(const Options& o) {
  const repository::Repository repo(o.repo);
  emit_output(o, repo.fetch_bytes(entry_kind(o), o.id));
  return 0;
}

int cmd_list(const Options& o) {
  const repository::Repository repo(o.repo);
  for (const auto& e : repo.list(entry_kind(o))) {
    std::cout << e.id << "\t" << e.digest_hex << "\n";
  }
  return 0;
}

int cmd_instantiate(const Options& o) {
  const repository::Repository repo(o.repo);
  const crypto::KeyPair key = load_key(o);
  const crypto::Bytes cert = load_cert(o);
  const edoc::EDocument def_doc =
      repo.fetch(repository::EntryKind::kDefinition, o.type_id);
  if (!edoc::all_valid(edoc::verify_edoc(def_doc))) {
    throw Error(Errc::kSignatureInvalid,
                "stored definition '" + o.type_id + "' does not verify");
  }
  const auto def = schema::parse_type_definition(def_doc.payload());
  const auto values = edoc::parse_field_values(read_file(o.values));
  std::optional<std::string> tid;
  if (!o.transform_id.empty()) tid = o.transform_id;
  const edoc::EDocument inst =
      edoc::sign_instance(edoc::make_instance(def, values, 2), key, cert, tid);
  emit_output(o, serialized(inst));
  return 0;
}

int cmd_verify(const Options& o) {
  const repository::Repository repo(o.repo);
  const edoc::EDocument inst = edoc::parse_edoc(read_xml(o.input));
  const edoc::PipelineReport r = edoc::pipeline_verify(inst, repo);
  if (o.report_format == "lines") {
    for (const auto& s : r.steps) {
      std::cout << s.name << "\t" << edoc::outcome_name(s.outcome) << "\t" << s.detail
                << "\n";
    }
    std::cout << "overall\t" << (r.overall ? "PASS" : "FAIL") << "\t\n";
  } else {
    std::cout << r.to_text() << "overall " << (r.overall ? "PASS" : "FAIL") << "\n";
  }
  return r.overall ? 0 : kFailure;
}

int cmd_render(const Options& o) {
  const repository::Repository repo(o.repo);
  const edoc::EDocument inst = edoc::parse_edoc(read_xml(o.input));
  if (!edoc::all_valid(edoc::verify_edoc(inst))) {
    throw Error(Errc::kSignatureInvalid, "instance signature does not verify");
  }
  std::optional<std::string> tid;
  for (const auto& sig : inst.signatures) {
    tid = edoc::signed_properties_of(sig).transform_data_id;
    if (tid) break;
  }
  if (!tid) throw Error(Errc::kNotFound, "instance names no transformDataID");
  const edoc::EDocument t_doc = repo.fetch(repository::EntryKind::kTransform, *tid);
  if (!edoc::all_valid(edoc::verify_edoc(t_doc))) {
    throw Error(Errc::kSignatureInvalid, "transform '" + *tid + "' does not verify");
  }
  const auto t = transform::parse_transform_data(t_doc.payload());
  emit_output(o, xml::serialize_to_string(transform::apply(t.stylesheet, inst.payload())));
  return 0;
}

// "DuplicateId" -> "duplicate id".
std::string spaced(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (!out.empty()) out += ' ';
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      out += c;
    }
  }
  return out;
}

std::string describe(const Error& e) {
  std::string what = e.what();
  const std::string prefix = std::string(sigdoc::errc_name(e.code())) + ": ";
  if (what.starts_with(prefix)) what.erase(0, prefix.size());
  return spaced(sigdoc::errc_name(e.code())) + ": " + what;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Signed e-document tool"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--repo", o.repo, "Repository directory");
  app.add_option("--key", o.key, "Signing key (PEM)");
  app.add_option("--cert", o.cert, "Signer certificate (PEM or DER)");
  app.add_option("--report-format", o.report_format, "verify output: text or lines")
      ->check(CLI::IsMember({"text", "lines"}));

  const std::vector<std::string> kinds{"definition", "transform", "instance"};
  int (*handler)(const Options&) = nullptr;

  auto* keygen = app.add_subcommand("keygen", "Generate a key pair and certificate");
  keygen->add_option("--out", o.output, "Key file")->required();
  keygen->add_option("--cert-out", o.cert_out, "Certificate file (default KEY.crt)");
  keygen->add_option("--algorithm", o.algorithm, "rsa-sha1, rsa-sha256 or ed25519");
  keygen->add_option("--size", o.size, "RSA modulus bits");
  keygen->add_option("--seed", o.seed, "Reproducible keys, for tests only");
  keygen->add_option("--subject", o.subject, "Certificate common name");
  keygen->callback([&] { handler = cmd_keygen; });

  auto* compile = app.add_subcommand("compile", "Compile a generic definition");
  compile->add_option("generic", o.input, "Generic definition XML")->required();
  compile->add_option("--type-id", o.type_id, "Document type id")->required();
  compile->add_option("-o,--output", o.output, "Output file");
  compile->callback([&] { handler = cmd_compile; });

  auto* sign = app.add_subcommand("sign", "Wrap and sign a definition, transform or instance");
  sign->add_option("file", o.input, "Input XML")->required();
  sign->add_option("--kind", o.kind, "Content kind")->required()->check(CLI::IsMember(kinds));
  sign->add_option("--transform-id", o.transform_id,
                   "Instances: transform to name; stylesheets: id to assign");
  sign->add_option("--type-id", o.type_id, "Stylesheets: document type rendered");
  sign->add_option("-o,--output", o.output, "Output file");
  sign->callback([&] { handler = cmd_sign; });

  auto* store = app.add_subcommand("store", "Store a signed e-document");
  store->add_option("edoc", o.input, "E-document XML")->required();
  store->add_option("--kind", o.kind, "Entry kind")->required()->check(CLI::IsMember(kinds));
  store->add_option("--id", o.id, "Instance id");
  store->callback([&] { handler = cmd_store; });

  auto* fetch = app.add_subcommand("fetch", "Fetch a stored e-document");
  fetch->add_option("--kind", o.kind, "Entry kind")->required()->check(CLI::IsMember(kinds));
  fetch->add_option("--id", o.id, "Entry id")->required();
  fetch->add_option("-o,--output", o.output, "Output file");
  fetch->callback([&] { handler = cmd_fetch; });

  auto* list = app.add_subcommand("list", "List stored ids");
  list->add_option("--kind", o.kind, "Entry kind")->required()->check(CLI::IsMember(kinds));
  list->callback([&] { handler = cmd_list; });

  auto* inst = app.add_subcommand("instantiate", "Build and sign an instance");
  inst->add_option("--type-id", o.type_id, "Document type id")->required();
  inst->add_option("--values", o.values, "field=value lines")->required();
  inst->add_option("--transform-id", o.transform_id, "Transform to name");
  inst->add_option("-o,--output", o.output, "Output file");
  inst->callback([&] { handler = cmd_instantiate; });

  auto* verify = app.add_subcommand("verify", "Check an instance against its definition");
  verify->add_option("edoc", o.input, "Instance e-document")->required();
  verify->callback([&] { handler = cmd_verify; });

  auto* render = app.add_subcommand("render", "Render an instance with its transform");
  render->add_option("edoc", o.input, "Instance e-document")->required();
  render->add_option("-o,--output", o.output, "Output file");
  render->callback([&] { handler = cmd_render; });

  CLI11_PARSE(app, argc, argv);

  try {
    return handler(o);
  } catch (const sigdoc::edoc::ValueRejected& e) {
    std::cerr << "sigdoc: value rejected: " << e.report().summary() << "\n";
  } catch (const Error& e) {
    std::cerr << "sigdoc: " << describe(e) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "sigdoc: " << e.what() << "\n";
  }
  return kFailure;
}
