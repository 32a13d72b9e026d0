#include "lake/janitor/janitor.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "lake/common/encoding.hpp"
#include "lake/common/error.hpp"

namespace lake::janitor {

namespace ks = store::keyspace;
using catalogue::FileRecord;
using catalogue::FileStatus;
using nlohmann::json;

namespace {

constexpr std::string_view kLeaseKey = "janitor";

}  // namespace

json to_json(const SweepReport& r) {
  return {{"committed", r.committed}, {"purged", r.purged}, {"skipped", r.skipped}, {"deferred", r.deferred}};
}

json to_json(const ReconcileReport& r) {
  json flagged = json::array();
  for (const auto& f : r.flagged) flagged.push_back({{"file_id", f.file_id}, {"storage_path", f.storage_path}});
  return {{"committed", r.committed}, {"purged", r.purged}, {"flagged", flagged}, {"orphans", r.orphans}};
}

std::string summary_line(const SweepReport& r) {
  auto line = fmt::format("sweep: {} committed, {} purged, {} skipped", r.committed, r.purged, r.skipped);
  if (r.deferred > 0) line += fmt::format(", {} deferred (storage unreachable)", r.deferred);
  return line;
}

std::string summary_line(const ReconcileReport& r) {
  return fmt::format("reconcile: {} committed, {} purged, {} flagged, {} orphans", r.committed.size(),
                     r.purged.size(), r.flagged.size(), r.orphans.size());
}

/// Singleton lease document; expired leases may be taken over.
class Janitor::Lease {
 public:
  Lease(store::DocumentStore& store, const Clock& clock, Duration ttl) : store_(store) {
    const auto now = clock.now();
    auto current = store_.get(ks::kLeases, kLeaseKey);
    if (current) {
      const auto until = parse_timestamp(current->doc.value("expires_at", ""));
      if (until && now < *until) fail(ErrorCode::kConflict, "a janitor run is already in progress");
    }
    holder_ = new_id();
    store::WriteBatch batch;
    batch.put(ks::kLeases, kLeaseKey, json{{"holder", holder_}, {"expires_at", format_timestamp(now + ttl)}},
              current ? current->revision : store::kAbsent);
    if (!store_.commit(batch)) fail(ErrorCode::kConflict, "a janitor run is already in progress");
  }

  ~Lease() {
    auto current = store_.get(ks::kLeases, kLeaseKey);
    if (current && current->doc.value("holder", "") == holder_) {
      store::WriteBatch batch;
      batch.erase(ks::kLeases, kLeaseKey, current->revision);
      (void)store_.commit(batch);
    }
  }

  Lease(const Lease&) = delete;
  Lease& operator=(const Lease&) = delete;

 private:
  store::DocumentStore& store_;
  std::string holder_;
};

Janitor::Janitor(store::DocumentStore& store, const Clock& clock, catalogue::Catalogue& catalogue,
                 storage::TransferService& transfers, Options options)
    : store_(store), clock_(clock), catalogue_(catalogue), transfers_(transfers), options_(options), queue_(store) {}

catalogue::BatchExtension Janitor::settle_waiting(std::string_view outcome) const {
  return [this, outcome = std::string(outcome)](store::WriteBatch& batch, const FileRecord& record) {
    for (const auto& entry : queue_.entries_for_file(record.id)) {
      if (entry.state == EntryState::kWaiting) UploadQueue::stage_settle(batch, entry, outcome);
    }
  };
}

bool Janitor::object_present(const FileRecord& record) {
  const auto collection = catalogue_.get_collection(record.collection_id);
  return transfers_.object_exists(collection.storage_type, record.bucket, record.storage_path);
}

catalogue::CommitResult Janitor::commit_upload(std::string_view file_id, std::optional<std::uint64_t> declared_size,
                                               std::optional<std::string> checksum) {
  return catalogue_.commit_file(file_id, declared_size, std::move(checksum), settle_waiting("committed"));
}

SweepReport Janitor::sweep(Timestamp now) {
  Lease lease(store_, clock_, options_.lease_ttl);
  SweepReport report;

  for (const auto& entry : queue_.waiting()) {
    if (now < entry.expires_at) {
      ++report.skipped;
      continue;
    }
    const auto record = catalogue_.find_file(entry.file_id);
    if (!record || record->status == FileStatus::kCommitted) {
      store::WriteBatch batch;
      UploadQueue::stage_settle(batch, entry, "superseded");
      (void)store_.commit(batch);
      continue;
    }

    bool present = false;
    try {
      present = object_present(*record);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTransport) throw;
      spdlog::warn("janitor: {} left waiting: {}", entry.file_id, e.what());
      ++report.deferred;
      continue;
    }

    if (present) {
      try {
        if (catalogue_.commit_file(entry.file_id, std::nullopt, std::nullopt, settle_waiting("committed")).applied) {
          ++report.committed;
        }
        continue;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kTransport) {
          ++report.deferred;
          continue;
        }
        if (e.code() != ErrorCode::kPreconditionFailed) throw;
        // Object vanished between the check and the commit.
      }
    }

    if (now >= entry.purge_after) {
      if (catalogue_.purge_pending(entry.file_id, settle_waiting("purged"))) ++report.purged;
    } else {
      ++report.skipped;
    }
  }
  return report;
}

ReconcileReport Janitor::reconcile_full(bool list_orphans) {
  Lease lease(store_, clock_, options_.lease_ttl);
  const auto now = clock_.now();
  const auto& topts = transfers_.options();
  const auto grace = std::chrono::duration_cast<Duration>(topts.ticket_ttl * topts.purge_grace_factor);

  struct Observed {
    FileRecord record;
    bool present = false;
  };
  std::vector<Observed> observed;
  ReconcileReport report;

  // Read-only pass: any unreachable backend aborts before anything changes.
  try {
    std::map<std::pair<StorageType, std::string>, std::set<std::string>> referenced;
    for (auto& record : catalogue_.all_records()) {
      const auto collection = catalogue_.get_collection(record.collection_id);
      const bool present = transfers_.object_exists(collection.storage_type, record.bucket, record.storage_path);
      referenced[{collection.storage_type, record.bucket}].insert(record.storage_path);
      observed.push_back({std::move(record), present});
    }
    if (list_orphans) {
      for (const auto& [target, paths] : referenced) {
        for (auto& path : catalogue_.targets().adapter(target.first, target.second)->list()) {
          if (!paths.contains(path)) report.orphans.push_back(target.second + "/" + path);
        }
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kTransport) throw;
    fail(ErrorCode::kTransport, std::string("reconcile aborted, no changes made: ") + e.what());
  }

  for (const auto& [record, present] : observed) {
    if (record.status == FileStatus::kCommitted) {
      if (!present) report.flagged.push_back({record.id, record.storage_path});
      continue;
    }
    auto expires = record.requested_at + topts.ticket_ttl;
    auto purge_after = record.requested_at + std::max(grace, topts.ticket_ttl);
    const auto entries = queue_.entries_for_file(record.id);
    if (!entries.empty()) {
      expires = std::ranges::max(entries, {}, &QueueEntry::expires_at).expires_at;
      purge_after = std::ranges::max(entries, {}, &QueueEntry::purge_after).purge_after;
    }
    if (present && now >= expires) {
      try {
        if (catalogue_.commit_file(record.id, std::nullopt, std::nullopt, settle_waiting("committed")).applied) {
          report.committed.push_back(record.id);
        }
      } catch (const Error& e) {
        spdlog::warn("reconcile: commit of {} failed: {}", record.id, e.what());
      }
    } else if (!present && now >= purge_after) {
      if (catalogue_.purge_pending(record.id, settle_waiting("purged"))) report.purged.push_back(record.id);
    }
  }
  std::ranges::sort(report.orphans);
  return report;
}

SweepScheduler::SweepScheduler(Janitor& janitor, std::chrono::milliseconds interval)
    : janitor_(janitor), interval_(interval), thread_([this] { loop(); }) {}

SweepScheduler::~SweepScheduler() { stop(); }

void SweepScheduler::stop() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

void SweepScheduler::loop() {
  std::unique_lock lock(mutex_);
  while (!stopping_) {
    if (cv_.wait_for(lock, interval_, [this] { return stopping_; })) break;
    lock.unlock();
    try {
      const auto report = janitor_.sweep();
      if (report.committed + report.purged + report.deferred > 0) spdlog::info("{}", summary_line(report));
    } catch (const std::exception& e) {
      spdlog::warn("periodic sweep skipped: {}", e.what());
    }
    lock.lock();
  }
}

}  // namespace lake::janitor
