#include "lake/storage/transfers.hpp"

#include "lake/common/error.hpp"
#include "lake/janitor/upload_queue.hpp"

namespace lake::storage {

namespace ks = store::keyspace;
using nlohmann::json;

namespace {

json to_document(const UploadTicket& t) {
  return {{"ticket_id", t.ticket_id},
          {"file_id", t.file_id},
          {"upload_url", t.upload_url},
          {"storage_type", to_string(t.storage_type)},
          {"bucket", t.bucket},
          {"storage_path", t.storage_path},
          {"issued_at", format_timestamp(t.issued_at)},
          {"expires_at", format_timestamp(t.expires_at)}};
}

}  // namespace

json to_public_json(const UploadTicket& t) { return to_document(t); }

json to_public_json(const DownloadGrant& g) {
  return {{"grant_id", g.grant_id},
          {"file_id", g.file_id},
          {"file_name", g.file_name},
          {"download_url", g.download_url},
          {"expires_at", format_timestamp(g.expires_at)}};
}

TransferService::TransferService(store::DocumentStore& store, const Clock& clock, catalogue::Catalogue& catalogue,
                                 Options options)
    : store_(store), clock_(clock), catalogue_(catalogue), options_(options) {}

UploadTicket TransferService::issue_upload_ticket(const catalogue::FileRecord& record) {
  if (record.status != catalogue::FileStatus::kPending) fail(ErrorCode::kConflict, "file already committed");
  const auto collection = catalogue_.get_collection(record.collection_id);
  auto adapter = catalogue_.targets().adapter(collection.storage_type, record.bucket);

  UploadTicket ticket;
  ticket.ticket_id = new_secret_token();
  ticket.file_id = record.id;
  ticket.storage_type = collection.storage_type;
  ticket.bucket = record.bucket;
  ticket.storage_path = record.storage_path;
  ticket.issued_at = clock_.now();
  ticket.expires_at = ticket.issued_at + options_.ticket_ttl;
  ticket.upload_url = adapter->upload_url(ticket.ticket_id, ticket.storage_path);

  const auto grace = std::chrono::duration_cast<Duration>(options_.ticket_ttl * options_.purge_grace_factor);
  const auto purge_after = std::max(ticket.expires_at, ticket.issued_at + grace);

  store::WriteBatch batch;
  batch.put(ks::kTickets, ticket.ticket_id, to_document(ticket), store::kAbsent);
  janitor::UploadQueue::stage_enqueue(batch, janitor::UploadQueue::entry_for(ticket, purge_after));
  if (!store_.commit(batch)) fail(ErrorCode::kConflict, "ticket already issued");
  return ticket;
}

DownloadGrant TransferService::issue_download_url(const catalogue::FileRecord& record,
                                                  const governance::Principal& caller) {
  if (record.status != catalogue::FileStatus::kCommitted) fail(ErrorCode::kNotFound, "file not available");
  if (!catalogue_.check_access(caller, record.collection_id)) {
    fail(ErrorCode::kForbidden, "no visa for this collection");
  }
  const auto collection = catalogue_.get_collection(record.collection_id);
  auto adapter = catalogue_.targets().adapter(collection.storage_type, record.bucket);

  DownloadGrant grant{new_secret_token(), record.id, record.file_name, {}, clock_.now() + options_.download_ttl};
  grant.download_url = adapter->download_url(grant.grant_id, record.storage_path);
  store_.put(ks::kDownloadGrants, grant.grant_id,
             json{{"file_id", record.id},
                  {"storage_type", to_string(collection.storage_type)},
                  {"bucket", record.bucket},
                  {"storage_path", record.storage_path},
                  {"expires_at", format_timestamp(grant.expires_at)}});
  return grant;
}

void TransferService::accept_upload(std::string_view ticket_id, std::span<const std::uint8_t> bytes) {
  auto stored = store_.get(ks::kTickets, ticket_id);
  if (!stored) fail(ErrorCode::kNotFound, "unknown upload ticket");
  const auto& t = stored->doc;
  const auto expires = parse_timestamp(t.value("expires_at", ""));
  if (!expires || clock_.now() >= *expires) fail(ErrorCode::kForbidden, "upload ticket expired");

  const auto record = catalogue_.find_file(t.value("file_id", ""));
  if (!record) fail(ErrorCode::kNotFound, "upload no longer expected");
  if (record->status == catalogue::FileStatus::kCommitted) fail(ErrorCode::kConflict, "file already committed");

  const auto type = parse_storage_type(t.value("storage_type", "")).value_or(StorageType::kLocal);
  catalogue_.targets().adapter(type, t.value("bucket", ""))->write(t.value("storage_path", ""), bytes);
}

Bytes TransferService::serve_download(std::string_view grant_id) {
  auto stored = store_.get(ks::kDownloadGrants, grant_id);
  if (!stored) fail(ErrorCode::kNotFound, "unknown download grant");
  const auto& g = stored->doc;
  const auto expires = parse_timestamp(g.value("expires_at", ""));
  if (!expires || clock_.now() >= *expires) fail(ErrorCode::kForbidden, "download grant expired");
  const auto type = parse_storage_type(g.value("storage_type", "")).value_or(StorageType::kLocal);
  return catalogue_.targets().adapter(type, g.value("bucket", ""))->read(g.value("storage_path", ""));
}

bool TransferService::object_exists(StorageType type, std::string_view bucket, std::string_view path) {
  return catalogue_.targets().adapter(type, bucket)->exists(path);
}

void TransferService::delete_object(StorageType type, std::string_view bucket, std::string_view path) {
  catalogue_.targets().adapter(type, bucket)->remove(path);
}

}  // namespace lake::storage
