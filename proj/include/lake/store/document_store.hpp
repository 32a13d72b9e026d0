#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace lake::store {

using Document = nlohmann::json;

/// Named keyspaces of the catalogue store.
namespace keyspace {
inline constexpr std::string_view kUsers = "users";
inline constexpr std::string_view kUserLogins = "user_logins";
inline constexpr std::string_view kUserEmails = "user_emails";
inline constexpr std::string_view kTokens = "tokens";
inline constexpr std::string_view kResetTokens = "reset_tokens";
inline constexpr std::string_view kCollections = "collections";
inline constexpr std::string_view kCollectionNames = "collection_names";
inline constexpr std::string_view kFiles = "files";
inline constexpr std::string_view kVersionSlots = "version_slots";
inline constexpr std::string_view kVisas = "visas";
inline constexpr std::string_view kCredentials = "credentials";
inline constexpr std::string_view kRequests = "requests";
inline constexpr std::string_view kPendingRequests = "pending_requests";
inline constexpr std::string_view kTargets = "targets";
inline constexpr std::string_view kTickets = "tickets";
inline constexpr std::string_view kDownloadGrants = "download_grants";
inline constexpr std::string_view kUploadQueue = "upload_queue";
inline constexpr std::string_view kLeases = "leases";
}  // namespace keyspace

struct StoredDocument {
  std::string key;
  Document doc;
  std::uint64_t revision = 0;
};

/// Revision expectation for a conditional write.
/// kAbsent requires that the key does not exist; any other value must match
/// the stored revision exactly.
inline constexpr std::uint64_t kAbsent = 0;

class WriteBatch {
 public:
  struct Op {
    enum class Kind { kPut, kErase, kCheck } kind;
    std::string keyspace;
    std::string key;
    Document doc;
    std::optional<std::uint64_t> expected;
  };

  WriteBatch& put(std::string_view ks, std::string_view key, Document doc,
                  std::optional<std::uint64_t> expected = std::nullopt);
  WriteBatch& erase(std::string_view ks, std::string_view key,
                    std::optional<std::uint64_t> expected = std::nullopt);
  /// Precondition only; nothing is written.
  WriteBatch& check(std::string_view ks, std::string_view key, std::uint64_t expected);

  const std::vector<Op>& ops() const noexcept { return ops_; }
  bool empty() const noexcept { return ops_.empty(); }

 private:
  std::vector<Op> ops_;
};

/// Repository boundary: self-describing documents in named keyspaces.
///
/// Every mutation goes through commit(), which applies a batch atomically
/// or not at all. A batch fails (returns false) when any revision
/// expectation does not hold; that is the compare-and-swap primitive the
/// services build their per-key linearizability on.
class DocumentStore {
 public:
  virtual ~DocumentStore() = default;

  virtual std::optional<StoredDocument> get(std::string_view ks, std::string_view key) const = 0;
  /// Documents whose key starts with prefix, in ascending key order.
  virtual std::vector<StoredDocument> scan(std::string_view ks, std::string_view prefix = {}) const = 0;
  [[nodiscard]] virtual bool commit(const WriteBatch& batch) = 0;
  /// Changes after every successful commit, including commits made through
  /// another handle on the same storage.
  virtual std::uint64_t generation() const = 0;

  using Visitor = std::function<void(std::string_view key, const Document& doc, std::uint64_t revision)>;
  /// Same contents and order as scan() without materializing copies. The
  /// visitor must not call back into the store.
  virtual void visit(std::string_view ks, std::string_view prefix, const Visitor& visitor) const;

  void put(std::string_view ks, std::string_view key, Document doc);
  bool erase(std::string_view ks, std::string_view key);
  [[nodiscard]] bool insert(std::string_view ks, std::string_view key, Document doc);
  [[nodiscard]] bool compare_and_swap(std::string_view ks, std::string_view key,
                                      std::uint64_t expected, std::optional<Document> desired);
};

}  // namespace lake::store
