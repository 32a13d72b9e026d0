#pragma once

#include <filesystem>
#include <mutex>

#include "lake/store/document_store.hpp"

struct sqlite3;

namespace lake::store {

/// Single-node on-disk store. One table holds every keyspace; a batch is one
/// IMMEDIATE transaction, so several processes may share the file.
class SqliteStore final : public DocumentStore {
 public:
  explicit SqliteStore(const std::filesystem::path& file);
  ~SqliteStore() override;

  SqliteStore(const SqliteStore&) = delete;
  SqliteStore& operator=(const SqliteStore&) = delete;

  std::optional<StoredDocument> get(std::string_view ks, std::string_view key) const override;
  std::vector<StoredDocument> scan(std::string_view ks, std::string_view prefix = {}) const override;
  bool commit(const WriteBatch& batch) override;
  std::uint64_t generation() const override;

 private:
  void exec(const char* sql) const;

  sqlite3* db_ = nullptr;
  mutable std::mutex mutex_;
  std::uint64_t commits_ = 0;
};

}  // namespace lake::store
