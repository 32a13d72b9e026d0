#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lake/catalogue/query.hpp"
#include "lake/catalogue/types.hpp"
#include "lake/common/clock.hpp"
#include "lake/governance/visas.hpp"
#include "lake/storage/targets.hpp"
#include "lake/store/document_store.hpp"

namespace lake::catalogue {

struct VersionAssignment {
  std::uint64_t version = 0;
  std::string storage_path;
};

struct CommitResult {
  FileRecord record;
  /// False when the record was already committed (idempotent replay).
  bool applied = false;
};

/// Extra writes that must land atomically with a record transition, e.g.
/// settling the janitor's queue entry. Called once per attempt.
using BatchExtension = std::function<void(store::WriteBatch&, const FileRecord&)>;

/// The data catalogue: collection index plus file index.
///
/// Version identity is enforced at the store boundary. Every (key, version)
/// pair owns a slot document inserted with an absent-expectation in the same
/// batch as its record, so two registrations can never share a version even
/// across processes; the auto path retries on a lost race.
class Catalogue final : public governance::CollectionDirectory {
 public:
  Catalogue(store::DocumentStore& store, const Clock& clock, storage::TargetRegistry& targets,
            governance::AccessControl& access);

  /// Publishers and data managers only. Issues the collection's visa.
  Collection create_collection(const governance::Principal& owner, std::string name, StorageType type,
                               std::string bucket);
  std::optional<Collection> lookup_collection(std::string_view collection_id) const;
  Collection get_collection(std::string_view collection_id) const;
  std::optional<governance::CollectionRef> find_collection(std::string_view collection_id) const override;

  /// Metadata is discoverable regardless of visas.
  Listing<Collection> list_collections(Page page) const;
  /// Committed records of one collection.
  Listing<FileRecord> list_files(std::string_view collection_id, Page page) const;

  /// Next version for `key`: 1 + max over existing records of any status,
  /// or `requested` when no record holds it. Read-only preview; the
  /// assignment is made atomic by register_file.
  VersionAssignment resolve_version(const DedupKey& key, std::optional<std::uint64_t> requested) const;

  FileRecord register_file(const governance::Principal& uploader, const DedupKey& key,
                           std::optional<std::uint64_t> requested_version);

  /// Requires the object at the record's storage_path. size_bytes is taken
  /// from storage; a caller-declared size must agree with it.
  CommitResult commit_file(std::string_view file_id, std::optional<std::uint64_t> declared_size,
                           std::optional<std::string> checksum, const BatchExtension& extend = {});

  /// Removes a pending record and frees its version. Returns false if the
  /// record is gone or was committed in the meantime.
  bool purge_pending(std::string_view file_id, const BatchExtension& extend = {});

  std::optional<FileRecord> find_file(std::string_view file_id) const;
  FileRecord get_file(std::string_view file_id) const;
  /// Every record, pending ones included.
  std::vector<FileRecord> all_records() const;

  std::vector<FileRecord> basic_search(std::string_view keyword) const;
  std::vector<FileRecord> advanced_search(const FileQuery& query) const;

  bool check_access(const governance::Principal& user, std::string_view collection_id) const;

  storage::TargetRegistry& targets() { return targets_; }

 private:
  /// Committed records in record_order, decoded once per store generation.
  struct CommittedIndex {
    std::uint64_t generation = 0;
    std::vector<FileRecord> records;
    std::vector<std::string> lowered_names;
  };
  std::shared_ptr<const CommittedIndex> committed_index() const;

  store::DocumentStore& store_;
  const Clock& clock_;
  storage::TargetRegistry& targets_;
  governance::AccessControl& access_;
  mutable std::mutex index_mutex_;
  mutable std::shared_ptr<const CommittedIndex> index_;
};

/// Order used by every listing and search result.
bool record_order(const FileRecord& a, const FileRecord& b);

/// Slot-key prefix identifying a dedup key's lineage.
std::string lineage_key(const DedupKey& key);

}  // namespace lake::catalogue
