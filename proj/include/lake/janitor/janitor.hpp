#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "lake/catalogue/catalogue.hpp"
#include "lake/common/clock.hpp"
#include "lake/janitor/upload_queue.hpp"
#include "lake/storage/transfers.hpp"
#include "lake/store/document_store.hpp"

namespace lake::janitor {

struct SweepReport {
  std::size_t committed = 0;
  std::size_t purged = 0;
  std::size_t skipped = 0;
  /// Expired entries left waiting because storage could not be reached.
  std::size_t deferred = 0;
};

struct FlaggedRecord {
  std::string file_id;
  std::string storage_path;
};

struct ReconcileReport {
  std::vector<std::string> committed;
  std::vector<std::string> purged;
  std::vector<FlaggedRecord> flagged;
  /// Objects in a referenced bucket that no record points at. Never deleted.
  std::vector<std::string> orphans;

  bool empty() const { return committed.empty() && purged.empty() && flagged.empty() && orphans.empty(); }
};

nlohmann::json to_json(const SweepReport& r);
nlohmann::json to_json(const ReconcileReport& r);
std::string summary_line(const SweepReport& r);
std::string summary_line(const ReconcileReport& r);

class Janitor {
 public:
  struct Options {
    Duration lease_ttl = std::chrono::minutes(10);
  };

  Janitor(store::DocumentStore& store, const Clock& clock, catalogue::Catalogue& catalogue,
          storage::TransferService& transfers, Options options);
  Janitor(store::DocumentStore& store, const Clock& clock, catalogue::Catalogue& catalogue,
          storage::TransferService& transfers)
      : Janitor(store, clock, catalogue, transfers, Options{}) {}

  /// Conflict while another sweep or reconcile holds the lease.
  SweepReport sweep(Timestamp now);
  SweepReport sweep() { return sweep(clock_.now()); }

  /// Transport error (and no mutations) if any backend is unreachable.
  ReconcileReport reconcile_full(bool list_orphans = true);

  /// Client-driven commit; settles the file's waiting queue entries in the
  /// same batch.
  catalogue::CommitResult commit_upload(std::string_view file_id, std::optional<std::uint64_t> declared_size,
                                        std::optional<std::string> checksum);

  UploadQueue& queue() { return queue_; }

 private:
  class Lease;

  catalogue::BatchExtension settle_waiting(std::string_view outcome) const;
  bool object_present(const catalogue::FileRecord& record);

  store::DocumentStore& store_;
  const Clock& clock_;
  catalogue::Catalogue& catalogue_;
  storage::TransferService& transfers_;
  Options options_;
  UploadQueue queue_;
};

/// Interval-driven sweeps on a background thread.
class SweepScheduler {
 public:
  SweepScheduler(Janitor& janitor, std::chrono::milliseconds interval);
  ~SweepScheduler();
  SweepScheduler(const SweepScheduler&) = delete;
  SweepScheduler& operator=(const SweepScheduler&) = delete;

  void stop();

 private:
  void loop();

  Janitor& janitor_;
  std::chrono::milliseconds interval_;
  std::mutex mutex_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::thread thread_;
};

}  // namespace lake::janitor
