#include "lake/store/memory_store.hpp"

#include <mutex>

namespace lake::store {

std::optional<StoredDocument> MemoryStore::get(std::string_view ks, std::string_view key) const {
  std::shared_lock lock(mutex_);
  auto space = keyspaces_.find(ks);
  if (space == keyspaces_.end()) return std::nullopt;
  auto it = space->second.find(key);
  if (it == space->second.end()) return std::nullopt;
  return StoredDocument{it->first, it->second.doc, it->second.revision};
}

std::vector<StoredDocument> MemoryStore::scan(std::string_view ks, std::string_view prefix) const {
  std::shared_lock lock(mutex_);
  std::vector<StoredDocument> out;
  auto space = keyspaces_.find(ks);
  if (space == keyspaces_.end()) return out;
  for (auto it = space->second.lower_bound(prefix); it != space->second.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    out.push_back({it->first, it->second.doc, it->second.revision});
  }
  return out;
}

void MemoryStore::visit(std::string_view ks, std::string_view prefix, const Visitor& visitor) const {
  std::shared_lock lock(mutex_);
  auto space = keyspaces_.find(ks);
  if (space == keyspaces_.end()) return;
  for (auto it = space->second.lower_bound(prefix); it != space->second.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    visitor(it->first, it->second.doc, it->second.revision);
  }
}

bool MemoryStore::commit(const WriteBatch& batch) {
  std::unique_lock lock(mutex_);
  for (const auto& op : batch.ops()) {
    if (!op.expected) continue;
    std::uint64_t current = kAbsent;
    if (auto space = keyspaces_.find(op.keyspace); space != keyspaces_.end()) {
      if (auto it = space->second.find(op.key); it != space->second.end()) current = it->second.revision;
    }
    if (current != *op.expected) return false;
  }
  for (const auto& op : batch.ops()) {
    switch (op.kind) {
      case WriteBatch::Op::Kind::kPut:
        keyspaces_[op.keyspace].insert_or_assign(op.key, Entry{op.doc, next_revision_++});
        break;
      case WriteBatch::Op::Kind::kErase:
        if (auto space = keyspaces_.find(op.keyspace); space != keyspaces_.end()) {
          if (auto it = space->second.find(op.key); it != space->second.end()) space->second.erase(it);
        }
        break;
      case WriteBatch::Op::Kind::kCheck:
        break;
    }
  }
  ++commits_;
  return true;
}

std::uint64_t MemoryStore::generation() const {
  std::shared_lock lock(mutex_);
  return commits_;
}

}  // namespace lake::store
