#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lake/common/clock.hpp"
#include "lake/storage/transfers.hpp"
#include "lake/store/document_store.hpp"

namespace lake::janitor {

enum class EntryState { kWaiting, kSettled };

/// One entry per upload ticket. Settled entries are terminal.
struct QueueEntry {
  std::string ticket_id;
  std::string file_id;
  Timestamp expires_at;
  Timestamp purge_after;
  EntryState state = EntryState::kWaiting;
  /// "committed", "purged", or "superseded" once settled.
  std::optional<std::string> outcome;
  std::uint64_t revision = 0;
};

/// Entries are keyed "<file_id>/<ticket_id>" so a record's entries can be
/// found by prefix.
class UploadQueue {
 public:
  explicit UploadQueue(store::DocumentStore& store) : store_(store) {}

  static QueueEntry entry_for(const storage::UploadTicket& ticket, Timestamp purge_after);

  /// Adds the insert to a caller's batch (absent-expectation on the key).
  static void stage_enqueue(store::WriteBatch& batch, const QueueEntry& entry);
  /// Adds a settle guarded by the entry's revision.
  static void stage_settle(store::WriteBatch& batch, const QueueEntry& entry, std::string_view outcome);

  /// Standalone enqueue; conflict if the ticket is already queued.
  QueueEntry enqueue(const storage::UploadTicket& ticket, Timestamp purge_after);

  std::vector<QueueEntry> entries() const;
  std::vector<QueueEntry> waiting() const;
  std::vector<QueueEntry> entries_for_file(std::string_view file_id) const;
  std::size_t size() const;

 private:
  store::DocumentStore& store_;
};

}  // namespace lake::janitor
