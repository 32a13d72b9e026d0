#pragma once

#include <map>
#include <shared_mutex>
#include <string>

#include "lake/store/document_store.hpp"

namespace lake::store {

/// Process-local store. Readers share the lock; batches take it exclusively.
class MemoryStore final : public DocumentStore {
 public:
  std::optional<StoredDocument> get(std::string_view ks, std::string_view key) const override;
  std::vector<StoredDocument> scan(std::string_view ks, std::string_view prefix = {}) const override;
  bool commit(const WriteBatch& batch) override;
  std::uint64_t generation() const override;
  void visit(std::string_view ks, std::string_view prefix, const Visitor& visitor) const override;

 private:
  struct Entry {
    Document doc;
    std::uint64_t revision;
  };
  using Keyspace = std::map<std::string, Entry, std::less<>>;

  mutable std::shared_mutex mutex_;
  std::map<std::string, Keyspace, std::less<>> keyspaces_;
  std::uint64_t next_revision_ = 1;
  std::uint64_t commits_ = 0;
};

}  // namespace lake::store
