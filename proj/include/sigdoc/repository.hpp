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

// Directory-backed store of signed definitions, transforms and instances.
//
// Layout under the root:
//   index.tsv      kind<TAB>id<TAB>sha256-hex<TAB>file<TAB>namespace-or-empty
//   index.lock     advisory lock serializing writers
//   entries/       one file per entry, named by a hash of (kind, id)
//
// Entry bytes land (write, fsync, rename) before the index names them, and
// the index itself is replaced by rename, so readers never see a partial
// index and an indexed entry always has its bytes.

#ifndef SIGDOC_REPOSITORY_HPP_
#define SIGDOC_REPOSITORY_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sigdoc/edoc.hpp"

namespace sigdoc::repository {

enum class EntryKind { kDefinition, kTransform, kInstance };

std::string_view kind_name(EntryKind kind);
// Throws Errc::kInvalidArgument.
EntryKind kind_from_name(std::string_view name);

struct IndexEntry {
  EntryKind kind = EntryKind::kDefinition;
  std::string id;
  std::string digest_hex;  // SHA-256 of the stored bytes
  std::string file_name;
  std::string type_namespace;  // definitions only

  bool operator==(const IndexEntry&) const = default;
};

struct ListedEntry {
  std::string id;
  std::string digest_hex;

  bool operator==(const ListedEntry&) const = default;
};

class Repository : public edoc::DefinitionLookup {
 public:
  // Creates the directory layout when missing. Throws Errc::kStorageFailure.
  explicit Repository(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Verifies every signature, derives the id (documentTypeID,
  // transformDataID, or `instance_id` for instances) and stores the
  // serialized envelope. Throws kSignatureInvalid, kDuplicateId,
  // kStorageFailure, kInvalidArgument, or the parse error of the content.
  std::string store(EntryKind kind, const edoc::EDocument& edoc,
                    const std::optional<std::string>& instance_id = std::nullopt);

  // Throws kNotFound or kCorruptEntry. Signatures are not checked here.
  edoc::EDocument fetch(EntryKind kind, const std::string& id) const;

  // The stored bytes, digest checked. Throws kNotFound or kCorruptEntry.
  std::string fetch_bytes(EntryKind kind, const std::string& id) const;

  // Throws kNotFound, kAmbiguousNamespace or kCorruptEntry.
  edoc::EDocument find_definition_by_namespace(
      const std::string& namespace_uri) const override;

  // Sorted by id.
  std::vector<ListedEntry> list(EntryKind kind) const;

  std::vector<IndexEntry> index() const;

  // Deletes entry files the index does not name. Returns how many.
  std::size_t sweep_orphans();

 private:
  std::filesystem::path index_path() const;
  std::filesystem::path entries_dir() const;
  const IndexEntry& lookup(const std::vector<IndexEntry>& index, EntryKind kind,
                           const std::string& id) const;
  std::string read_checked(const IndexEntry& entry) const;

  std::filesystem::path root_;
};

}  // namespace sigdoc::repository

#endif  // SIGDOC_REPOSITORY_HPP_
