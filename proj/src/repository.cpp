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

#include "sigdoc/repository.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "sigdoc/schema.hpp"
#include "sigdoc/transform.hpp"

namespace sigdoc::repository {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void storage_failure(const std::string& what) {
  throw Error(Errc::kStorageFailure, what);
}

[[noreturn]] void os_failure(const std::string& what) {
  storage_failure(what + ": " + std::strerror(errno));
}

std::string sha256_hex(std::string_view bytes) {
  return crypto::to_hex(crypto::digest(bytes, crypto::kSha256).value);
}

class FileLock {
 public:
  explicit FileLock(const fs::path& path) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) os_failure("open " + path.string());
    while (::flock(fd_, LOCK_EX) != 0) {
      if (errno != EINTR) {
        ::close(fd_);
        os_failure("lock " + path.string());
      }
    }
  }
  ~FileLock() { ::close(fd_); }  // closing releases the lock
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

void write_all(int fd, std::string_view bytes, const fs::path& path) {
  while (!bytes.empty()) {
    const ssize_t n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      os_failure("write " + path.string());
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

void sync_dir(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (fd < 0) os_failure("open " + dir.string());
  ::fsync(fd);
  ::close(fd);
}

// Temp file in the target's directory, fsync, rename over the target.
void replace_file(const fs::path& target, std::string_view bytes) {
  static std::atomic<unsigned> counter{0};
  const fs::path tmp = target.parent_path() /
                       (".tmp-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter++) + "-" + target.filename().string());
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) os_failure("create " + tmp.string());
  try {
    write_all(fd, bytes, tmp);
    if (::fsync(fd) != 0) os_failure("fsync " + tmp.string());
  } catch (...) {
    ::close(fd);
    ::unlink(tmp.c_str());
    throw;
  }
  ::close(fd);
  if (::rename(tmp.c_str(), target.c_str()) != 0) {
    const int saved = errno;
    ::unlink(tmp.c_str());
    errno = saved;
    os_failure("rename to " + target.string());
  }
  sync_dir(target.parent_path());
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.emplace_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

std::vector<IndexEntry> parse_index(std::string_view text) {
  std::vector<IndexEntry> out;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    if (nl == std::string_view::npos) storage_failure("index ends mid-line");
    const std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl + 1);
    ++line_no;
    const auto f = split_tabs(line);
    if (f.size() != 5) {
      storage_failure("index line " + std::to_string(line_no) + " is malformed");
    }
    IndexEntry e;
    try {
      e.kind = kind_from_name(f[0]);
    } catch (const Error&) {
      storage_failure("index line " + std::to_string(line_no) + " has kind '" + f[0] + "'");
    }
    e.id = f[1];
    e.digest_hex = f[2];
    e.file_name = f[3];
    e.type_namespace = f[4];
    out.push_back(std::move(e));
  }
  return out;
}

std::string format_index(const std::vector<IndexEntry>& index) {
  std::string out;
  for (const auto& e : index) {
    out += std::string(kind_name(e.kind)) + "\t" + e.id + "\t" + e.digest_hex + "\t" +
           e.file_name + "\t" + e.type_namespace + "\n";
  }
  return out;
}

void check_field(const std::string& value, std::string_view what) {
  if (value.empty()) throw Error(Errc::kInvalidArgument, "empty " + std::string(what));
  if (value.find_first_of("\t\r\n") != std::string::npos) {
    throw Error(Errc::kInvalidArgument,
                std::string(what) + " contains a tab or line break");
  }
}

}  // namespace

std::string_view kind_name(EntryKind kind) {
  switch (kind) {
    case EntryKind::kDefinition: return "definition";
    case EntryKind::kTransform: return "transform";
    case EntryKind::kInstance: return "instance";
  }
  return "?";
}

EntryKind kind_from_name(std::string_view name) {
  for (EntryKind k : {EntryKind::kDefinition, EntryKind::kTransform, EntryKind::kInstance}) {
    if (kind_name(k) == name) return k;
  }
  throw Error(Errc::kInvalidArgument, "unknown entry kind '" + std::string(name) + "'");
}

Repository::Repository(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(entries_dir(), ec);
  if (ec) storage_failure("create " + entries_dir().string() + ": " + ec.message());
}

fs::path Repository::index_path() const { return root_ / "index.tsv"; }

fs::path Repository::entries_dir() const { return root_ / "entries"; }

std::vector<IndexEntry> Repository::index() const {
  const auto text = read_file(index_path());
  if (!text) return {};
  return parse_index(*text);
}

std::string Repository::store(EntryKind kind, const edoc::EDocument& edoc,
                              const std::optional<std::string>& instance_id) {
  try {
    if (!edoc::all_valid(edoc::verify_edoc(edoc))) {
      throw Error(Errc::kSignatureInvalid, "e-document signature does not verify");
    }
  } catch (const Error& e) {
    if (e.code() == Errc::kSignatureInvalid) throw;
    throw Error(Errc::kSignatureInvalid, e.what());
  }

  IndexEntry entry;
  entry.kind = kind;
  switch (kind) {
    case EntryKind::kDefinition: {
      const auto def = schema::parse_type_definition(edoc.payload());
      entry.id = def.type_id().value();
      entry.type_namespace = def.schema().target_namespace;
      break;
    }
    case EntryKind::kTransform:
      entry.id = transform::parse_transform_data(edoc.payload()).transform_id;
      break;
    case EntryKind::kInstance:
      if (!instance_id) throw Error(Errc::kInvalidArgument, "instances need an id");
      entry.id = *instance_id;
      break;
  }
  if (kind != EntryKind::kInstance && instance_id && *instance_id != entry.id) {
    throw Error(Errc::kInvalidArgument,
                "given id '" + *instance_id + "' differs from '" + entry.id + "'");
  }
  check_field(entry.id, "id");
  if (entry.type_namespace.find_first_of("\t\r\n") != std::string::npos) {
    throw Error(Errc::kInvalidArgument, "namespace contains a tab or line break");
  }

  const std::string bytes = xml::serialize_to_string(edoc::emit_edoc(edoc));
  entry.digest_hex = sha256_hex(bytes);
  entry.file_name =
      sha256_hex(std::string(kind_name(kind)) + "\t" + entry.id).substr(0, 40) + ".xml";

  FileLock lock(root_ / "index.lock");
  std::vector<IndexEntry> current = index();
  for (const auto& e : current) {
    if (e.kind == kind && e.id == entry.id) {
      throw Error(Errc::kDuplicateId, std::string(kind_name(kind)) + " '" + entry.id +
                                          "' is already stored");
    }
  }
  replace_file(entries_dir() / entry.file_name, bytes);
  current.push_back(entry);
  replace_file(index_path(), format_index(current));
  return entry.id;
}

const IndexEntry& Repository::lookup(const std::vector<IndexEntry>& index,
                                     EntryKind kind, const std::string& id) const {
  for (const auto& e : index) {
    if (e.kind == kind && e.id == id) return e;
  }
  throw Error(Errc::kNotFound, "no " + std::string(kind_name(kind)) + " '" + id + "'");
}

std::string Repository::read_checked(const IndexEntry& entry) const {
  const auto bytes = read_file(entries_dir() / entry.file_name);
  if (!bytes) throw Error(Errc::kCorruptEntry, "entry file for '" + entry.id + "' is missing");
  if (sha256_hex(*bytes) != entry.digest_hex) {
    throw Error(Errc::kCorruptEntry, "stored bytes of '" + entry.id +
                                         "' do not match the indexed digest");
  }
  return *bytes;
}

std::string Repository::fetch_bytes(EntryKind kind, const std::string& id) const {
  const auto idx = index();
  return read_checked(lookup(idx, kind, id));
}

edoc::EDocument Repository::fetch(EntryKind kind, const std::string& id) const {
  const std::string bytes = fetch_bytes(kind, id);
  try {
    return edoc::parse_edoc(xml::parse(bytes));
  } catch (const Error& e) {
    throw Error(Errc::kCorruptEntry, "'" + id + "': " + e.what());
  }
}

edoc::EDocument Repository::find_definition_by_namespace(
    const std::string& namespace_uri) const {
  const auto idx = index();
  const IndexEntry* found = nullptr;
  for (const auto& e : idx) {
    if (e.kind != EntryKind::kDefinition || e.type_namespace != namespace_uri) continue;
    if (found) {
      throw Error(Errc::kAmbiguousNamespace, "definitions '" + found->id + "' and '" +
                                                 e.id + "' share " + namespace_uri);
    }
    found = &e;
  }
  if (!found) throw Error(Errc::kNotFound, "no definition for namespace " + namespace_uri);
  return fetch(EntryKind::kDefinition, found->id);
}

std::vector<ListedEntry> Repository::list(EntryKind kind) const {
  std::vector<ListedEntry> out;
  for (const auto& e : index()) {
    if (e.kind == kind) out.push_back({e.id, e.digest_hex});
  }
  std::sort(out.begin(), out.end(),
            [](const ListedEntry& a, const ListedEntry& b) { return a.id < b.id; });
  return out;
}

std::size_t Repository::sweep_orphans() {
  FileLock lock(root_ / "index.lock");
  std::set<std::string> live;
  for (const auto& e : index()) live.insert(e.file_name);
  std::size_t removed = 0;
  std::error_code ec;
  for (const auto& f : fs::directory_iterator(entries_dir(), ec)) {
    const std::string name = f.path().filename().string();
    if (!live.count(name) && fs::remove(f.path(), ec)) ++removed;
  }
  if (ec) storage_failure("sweep " + entries_dir().string() + ": " + ec.message());
  return removed;
}

}  // namespace sigdoc::repository
