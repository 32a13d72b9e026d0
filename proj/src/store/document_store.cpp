#include "lake/store/document_store.hpp"

namespace lake::store {

WriteBatch& WriteBatch::put(std::string_view ks, std::string_view key, Document doc,
                            std::optional<std::uint64_t> expected) {
  ops_.push_back({Op::Kind::kPut, std::string(ks), std::string(key), std::move(doc), expected});
  return *this;
}

WriteBatch& WriteBatch::erase(std::string_view ks, std::string_view key,
                              std::optional<std::uint64_t> expected) {
  ops_.push_back({Op::Kind::kErase, std::string(ks), std::string(key), nullptr, expected});
  return *this;
}

WriteBatch& WriteBatch::check(std::string_view ks, std::string_view key, std::uint64_t expected) {
  ops_.push_back({Op::Kind::kCheck, std::string(ks), std::string(key), nullptr, expected});
  return *this;
}

void DocumentStore::visit(std::string_view ks, std::string_view prefix, const Visitor& visitor) const {
  for (const auto& d : scan(ks, prefix)) visitor(d.key, d.doc, d.revision);
}

void DocumentStore::put(std::string_view ks, std::string_view key, Document doc) {
  WriteBatch batch;
  batch.put(ks, key, std::move(doc));
  (void)commit(batch);
}

bool DocumentStore::erase(std::string_view ks, std::string_view key) {
  if (!get(ks, key)) return false;
  WriteBatch batch;
  batch.erase(ks, key);
  return commit(batch);
}

bool DocumentStore::insert(std::string_view ks, std::string_view key, Document doc) {
  WriteBatch batch;
  batch.put(ks, key, std::move(doc), kAbsent);
  return commit(batch);
}

bool DocumentStore::compare_and_swap(std::string_view ks, std::string_view key,
                                     std::uint64_t expected, std::optional<Document> desired) {
  WriteBatch batch;
  if (desired) {
    batch.put(ks, key, std::move(*desired), expected);
  } else {
    batch.erase(ks, key, expected);
  }
  return commit(batch);
}

}  // namespace lake::store
