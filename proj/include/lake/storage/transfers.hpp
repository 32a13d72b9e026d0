#pragma once

#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lake/catalogue/catalogue.hpp"
#include "lake/common/clock.hpp"
#include "lake/common/encoding.hpp"
#include "lake/governance/users.hpp"
#include "lake/store/document_store.hpp"

namespace lake::storage {

/// Expiring authorization to write exactly one object path.
struct UploadTicket {
  std::string ticket_id;
  std::string file_id;
  std::string upload_url;
  StorageType storage_type = StorageType::kLocal;
  std::string bucket;
  std::string storage_path;
  Timestamp issued_at;
  Timestamp expires_at;
};

struct DownloadGrant {
  std::string grant_id;
  std::string file_id;
  std::string file_name;
  std::string download_url;
  Timestamp expires_at;
};

nlohmann::json to_public_json(const UploadTicket& ticket);
nlohmann::json to_public_json(const DownloadGrant& grant);

/// Direct upload/download URLs and the raw byte endpoints behind them.
class TransferService {
 public:
  struct Options {
    Duration ticket_ttl = std::chrono::minutes(15);
    Duration download_ttl = std::chrono::minutes(15);
    /// A waiting upload is purged no earlier than issued_at + factor * ticket_ttl.
    double purge_grace_factor = 2.0;
  };

  TransferService(store::DocumentStore& store, const Clock& clock, catalogue::Catalogue& catalogue, Options options);

  /// Persists the ticket and its janitor queue entry in one batch.
  UploadTicket issue_upload_ticket(const catalogue::FileRecord& record);
  DownloadGrant issue_download_url(const catalogue::FileRecord& record, const governance::Principal& caller);

  /// PUT /raw/{ticket_id}. Forbidden once the ticket has expired.
  void accept_upload(std::string_view ticket_id, std::span<const std::uint8_t> bytes);
  /// GET /raw/{grant_id}. Forbidden once the grant has expired.
  Bytes serve_download(std::string_view grant_id);

  bool object_exists(StorageType type, std::string_view bucket, std::string_view path);
  void delete_object(StorageType type, std::string_view bucket, std::string_view path);

  const Options& options() const { return options_; }

 private:
  store::DocumentStore& store_;
  const Clock& clock_;
  catalogue::Catalogue& catalogue_;
  Options options_;
};

}  // namespace lake::storage
