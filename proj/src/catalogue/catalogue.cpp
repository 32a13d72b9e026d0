#include "lake/catalogue/catalogue.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "lake/common/encoding.hpp"
#include "lake/common/error.hpp"

namespace lake::catalogue {

namespace ks = store::keyspace;
using nlohmann::json;

namespace {

// '|' terminates each component, so it and the escape character must not
// appear raw inside one.
std::string escape_component(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '%' || c == '|') {
      out += fmt::format("%{:02X}", static_cast<unsigned char>(c));
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string slot_key(std::string_view lineage, std::uint64_t version) {
  return fmt::format("{}{:010}", lineage, version);
}

std::optional<std::uint64_t> slot_version(std::string_view key, std::size_t lineage_size) {
  std::uint64_t v = 0;
  const auto digits = key.substr(lineage_size);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return v;
}

std::string name_index_key(StorageType type, std::string_view bucket, std::string_view name) {
  return fmt::format("{}/{}/{}", to_string(type), bucket, name);
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string lineage_key(const DedupKey& key) {
  return fmt::format("{}|{}|{}|{}|", escape_component(key.collection_id), escape_component(key.bucket),
                     to_string(key.file_category), escape_component(key.file_name));
}

bool record_order(const FileRecord& a, const FileRecord& b) {
  return std::tie(a.collection_id, a.file_name, a.file_category, a.version, a.id) <
         std::tie(b.collection_id, b.file_name, b.file_category, b.version, b.id);
}

Catalogue::Catalogue(store::DocumentStore& store, const Clock& clock, storage::TargetRegistry& targets,
                     governance::AccessControl& access)
    : store_(store), clock_(clock), targets_(targets), access_(access) {}

Collection Catalogue::create_collection(const governance::Principal& owner, std::string name, StorageType type,
                                        std::string bucket) {
  if (!is_valid_collection_name(name)) throw validation_error("name", "1-128 characters of [A-Za-z0-9._-]");
  if (!storage::is_valid_bucket_name(bucket)) throw validation_error("bucket", "1-63 characters of [A-Za-z0-9._-]");
  if (owner.role == Role::kConsumer) fail(ErrorCode::kForbidden, "consumers cannot create collections");
  if (!targets_.find(type, bucket)) fail(ErrorCode::kNotFound, "storage target not registered");

  const auto index_key = name_index_key(type, bucket, name);
  if (store_.get(ks::kCollectionNames, index_key)) {
    fail(ErrorCode::kConflict, "collection name already used on this bucket");
  }

  Collection collection{new_id(), std::move(name), type, std::move(bucket), owner.user_id, {}, clock_.now()};
  const auto visa = access_.broker().issue(collection.id, owner.user_id);
  collection.visa_id = visa.visa_id;

  store::WriteBatch batch;
  batch.put(ks::kCollectionNames, index_key, json{{"collection_id", collection.id}}, store::kAbsent);
  batch.put(ks::kCollections, collection.id, to_document(collection), store::kAbsent);
  if (!store_.commit(batch)) {
    access_.broker().retire(visa.visa_id);
    fail(ErrorCode::kConflict, "collection name already used on this bucket");
  }
  return collection;
}

std::optional<Collection> Catalogue::lookup_collection(std::string_view collection_id) const {
  auto doc = store_.get(ks::kCollections, collection_id);
  if (!doc) return std::nullopt;
  return collection_from_document(doc->doc);
}

Collection Catalogue::get_collection(std::string_view collection_id) const {
  auto c = lookup_collection(collection_id);
  if (!c) fail(ErrorCode::kNotFound, "collection not found");
  return *c;
}

std::optional<governance::CollectionRef> Catalogue::find_collection(std::string_view collection_id) const {
  auto c = lookup_collection(collection_id);
  if (!c) return std::nullopt;
  return governance::CollectionRef{c->id, c->owner_id, c->visa_id};
}

bool Catalogue::check_access(const governance::Principal& user, std::string_view collection_id) const {
  auto ref = find_collection(collection_id);
  if (!ref) fail(ErrorCode::kNotFound, "collection not found");
  return access_.check_access(user, *ref);
}

Listing<Collection> Catalogue::list_collections(Page page) const {
  std::vector<Collection> all;
  for (const auto& doc : store_.scan(ks::kCollections)) all.push_back(collection_from_document(doc.doc));
  std::sort(all.begin(), all.end(), [](const Collection& a, const Collection& b) {
    return std::tie(a.name, a.bucket, a.id) < std::tie(b.name, b.bucket, b.id);
  });
  return paginate(std::move(all), page);
}

Listing<FileRecord> Catalogue::list_files(std::string_view collection_id, Page page) const {
  (void)get_collection(collection_id);
  std::vector<FileRecord> out;
  for (const auto& r : committed_index()->records) {
    if (r.collection_id == collection_id) out.push_back(r);
  }
  return paginate(std::move(out), page);
}

VersionAssignment Catalogue::resolve_version(const DedupKey& key, std::optional<std::uint64_t> requested) const {
  const auto collection = get_collection(key.collection_id);
  if (requested && (*requested == 0 || *requested > kMaxVersion)) {
    throw validation_error("version", "must be a positive integer");
  }
  const auto lineage = lineage_key(key);
  std::uint64_t version = 0;
  if (requested) {
    if (store_.get(ks::kVersionSlots, slot_key(lineage, *requested))) {
      fail(ErrorCode::kConflict, fmt::format("version {} already exists for this file", *requested));
    }
    version = *requested;
  } else {
    std::uint64_t max = 0;
    for (const auto& slot : store_.scan(ks::kVersionSlots, lineage)) {
      max = std::max(max, slot_version(slot.key, lineage.size()).value_or(0));
    }
    if (max >= kMaxVersion) fail(ErrorCode::kConflict, "version space exhausted for this file");
    version = max + 1;
  }
  return {version, storage_path_for(collection.name, version, key.file_name)};
}

FileRecord Catalogue::register_file(const governance::Principal& uploader, const DedupKey& key,
                                    std::optional<std::uint64_t> requested_version) {
  if (!is_valid_file_name(key.file_name)) throw validation_error("file_name", "not a valid file name");
  const auto collection = get_collection(key.collection_id);
  if (!targets_.find(collection.storage_type, key.bucket)) {
    fail(ErrorCode::kNotFound, "storage target not registered for this collection's storage type");
  }
  if (!access_.check_access(uploader, {collection.id, collection.owner_id, collection.visa_id})) {
    fail(ErrorCode::kForbidden, "no visa for this collection");
  }

  const auto lineage = lineage_key(key);
  for (;;) {
    const auto assignment = resolve_version(key, requested_version);
    FileRecord record;
    record.id = new_id();
    record.collection_id = collection.id;
    record.collection_name = collection.name;
    record.file_name = key.file_name;
    record.file_category = key.file_category;
    record.bucket = key.bucket;
    record.version = assignment.version;
    record.version_origin = requested_version ? VersionOrigin::kManual : VersionOrigin::kAuto;
    record.storage_path = assignment.storage_path;
    record.status = FileStatus::kPending;
    record.uploaded_by = uploader.user_id;
    record.requested_at = clock_.now();

    store::WriteBatch batch;
    batch.put(ks::kVersionSlots, slot_key(lineage, record.version), json{{"file_id", record.id}}, store::kAbsent);
    batch.put(ks::kFiles, record.id, to_document(record), store::kAbsent);
    if (store_.commit(batch)) return record;
    if (requested_version) {
      fail(ErrorCode::kConflict, fmt::format("version {} already exists for this file", *requested_version));
    }
  }
}

CommitResult Catalogue::commit_file(std::string_view file_id, std::optional<std::uint64_t> declared_size,
                                    std::optional<std::string> checksum, const BatchExtension& extend) {
  for (;;) {
    auto stored = store_.get(ks::kFiles, file_id);
    if (!stored) fail(ErrorCode::kNotFound, "file record not found");
    FileRecord record = file_from_document(stored->doc);
    if (record.status == FileStatus::kCommitted) return {std::move(record), false};

    const auto collection = get_collection(record.collection_id);
    const auto size = targets_.adapter(collection.storage_type, record.bucket)->size(record.storage_path);
    if (!size) fail(ErrorCode::kPreconditionFailed, "object not present at " + record.storage_path);
    if (declared_size && *declared_size != *size) {
      fail(ErrorCode::kPreconditionFailed,
           fmt::format("declared size {} does not match stored size {}", *declared_size, *size));
    }

    record.status = FileStatus::kCommitted;
    record.committed_at = clock_.now();
    record.size_bytes = *size;
    if (checksum) record.checksum = checksum;

    store::WriteBatch batch;
    batch.put(ks::kFiles, record.id, to_document(record), stored->revision);
    if (extend) extend(batch, record);
    if (store_.commit(batch)) return {std::move(record), true};
  }
}

bool Catalogue::purge_pending(std::string_view file_id, const BatchExtension& extend) {
  for (;;) {
    auto stored = store_.get(ks::kFiles, file_id);
    if (!stored) return false;
    const FileRecord record = file_from_document(stored->doc);
    if (record.status != FileStatus::kPending) return false;

    const auto slot = slot_key(lineage_key(record.key()), record.version);
    store::WriteBatch batch;
    batch.erase(ks::kFiles, record.id, stored->revision);
    if (auto s = store_.get(ks::kVersionSlots, slot); s && s->doc.value("file_id", "") == record.id) {
      batch.erase(ks::kVersionSlots, slot, s->revision);
    }
    if (extend) extend(batch, record);
    if (store_.commit(batch)) return true;
  }
}

std::optional<FileRecord> Catalogue::find_file(std::string_view file_id) const {
  auto doc = store_.get(ks::kFiles, file_id);
  if (!doc) return std::nullopt;
  return file_from_document(doc->doc);
}

FileRecord Catalogue::get_file(std::string_view file_id) const {
  auto r = find_file(file_id);
  if (!r) fail(ErrorCode::kNotFound, "file record not found");
  return *r;
}

std::vector<FileRecord> Catalogue::all_records() const {
  std::vector<FileRecord> out;
  for (const auto& doc : store_.scan(ks::kFiles)) out.push_back(file_from_document(doc.doc));
  std::sort(out.begin(), out.end(), record_order);
  return out;
}

std::shared_ptr<const Catalogue::CommittedIndex> Catalogue::committed_index() const {
  const auto generation = store_.generation();
  std::lock_guard lock(index_mutex_);
  if (index_ && index_->generation == generation) return index_;
  auto fresh = std::make_shared<CommittedIndex>();
  fresh->generation = generation;
  store_.visit(ks::kFiles, {}, [&](std::string_view, const json& doc, std::uint64_t) {
    const auto status = doc.find("status");
    if (status != doc.end() && *status == "committed") fresh->records.push_back(file_from_document(doc));
  });
  std::sort(fresh->records.begin(), fresh->records.end(), record_order);
  fresh->lowered_names.reserve(fresh->records.size());
  for (const auto& r : fresh->records) fresh->lowered_names.push_back(lower_ascii(r.file_name));
  index_ = std::move(fresh);
  return index_;
}

std::vector<FileRecord> Catalogue::basic_search(std::string_view keyword) const {
  const auto needle = lower_ascii(trim(keyword));
  if (needle.empty()) throw validation_error("keyword", "must not be empty");
  const auto index = committed_index();
  std::vector<FileRecord> out;
  for (std::size_t i = 0; i < index->records.size(); ++i) {
    if (index->lowered_names[i].find(needle) != std::string::npos) out.push_back(index->records[i]);
  }
  return out;
}

std::vector<FileRecord> Catalogue::advanced_search(const FileQuery& query) const {
  const auto index = committed_index();
  std::vector<FileRecord> out;
  std::ranges::copy_if(index->records, std::back_inserter(out), [&](const FileRecord& r) { return query.matches(r); });
  return out;
}

}  // namespace lake::catalogue
