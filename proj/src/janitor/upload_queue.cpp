#include "lake/janitor/upload_queue.hpp"

#include "lake/common/error.hpp"

namespace lake::janitor {

namespace ks = store::keyspace;
using nlohmann::json;

namespace {

std::string entry_key(std::string_view file_id, std::string_view ticket_id) {
  return std::string(file_id) + "/" + std::string(ticket_id);
}

json to_document(const QueueEntry& e) {
  json d{{"ticket_id", e.ticket_id},
         {"file_id", e.file_id},
         {"expires_at", format_timestamp(e.expires_at)},
         {"purge_after", format_timestamp(e.purge_after)},
         {"state", e.state == EntryState::kWaiting ? "waiting" : "settled"}};
  d["outcome"] = e.outcome ? json(*e.outcome) : json(nullptr);
  return d;
}

QueueEntry from_document(const json& d, std::uint64_t revision) {
  QueueEntry e;
  e.ticket_id = d.at("ticket_id").get<std::string>();
  e.file_id = d.at("file_id").get<std::string>();
  e.expires_at = parse_timestamp(d.at("expires_at").get<std::string>()).value_or(Timestamp{});
  e.purge_after = parse_timestamp(d.at("purge_after").get<std::string>()).value_or(Timestamp{});
  e.state = d.at("state").get<std::string>() == "waiting" ? EntryState::kWaiting : EntryState::kSettled;
  if (d.contains("outcome") && d["outcome"].is_string()) e.outcome = d["outcome"].get<std::string>();
  e.revision = revision;
  return e;
}

}  // namespace

QueueEntry UploadQueue::entry_for(const storage::UploadTicket& ticket, Timestamp purge_after) {
  QueueEntry e;
  e.ticket_id = ticket.ticket_id;
  e.file_id = ticket.file_id;
  e.expires_at = ticket.expires_at;
  e.purge_after = purge_after;
  return e;
}

void UploadQueue::stage_enqueue(store::WriteBatch& batch, const QueueEntry& entry) {
  batch.put(ks::kUploadQueue, entry_key(entry.file_id, entry.ticket_id), to_document(entry), store::kAbsent);
}

void UploadQueue::stage_settle(store::WriteBatch& batch, const QueueEntry& entry, std::string_view outcome) {
  QueueEntry settled = entry;
  settled.state = EntryState::kSettled;
  settled.outcome = std::string(outcome);
  batch.put(ks::kUploadQueue, entry_key(entry.file_id, entry.ticket_id), to_document(settled), entry.revision);
}

QueueEntry UploadQueue::enqueue(const storage::UploadTicket& ticket, Timestamp purge_after) {
  auto entry = entry_for(ticket, purge_after);
  store::WriteBatch batch;
  stage_enqueue(batch, entry);
  if (!store_.commit(batch)) fail(ErrorCode::kConflict, "ticket already queued");
  return entry;
}

std::vector<QueueEntry> UploadQueue::entries() const {
  std::vector<QueueEntry> out;
  store_.visit(ks::kUploadQueue, {}, [&](std::string_view, const json& doc, std::uint64_t rev) {
    out.push_back(from_document(doc, rev));
  });
  return out;
}

std::vector<QueueEntry> UploadQueue::waiting() const {
  std::vector<QueueEntry> out;
  store_.visit(ks::kUploadQueue, {}, [&](std::string_view, const json& doc, std::uint64_t rev) {
    if (doc.value("state", "") == "waiting") out.push_back(from_document(doc, rev));
  });
  return out;
}

std::vector<QueueEntry> UploadQueue::entries_for_file(std::string_view file_id) const {
  std::vector<QueueEntry> out;
  store_.visit(ks::kUploadQueue, std::string(file_id) + "/",
               [&](std::string_view, const json& doc, std::uint64_t rev) { out.push_back(from_document(doc, rev)); });
  return out;
}

std::size_t UploadQueue::size() const {
  std::size_t n = 0;
  store_.visit(ks::kUploadQueue, {}, [&](std::string_view, const json&, std::uint64_t) { ++n; });
  return n;
}

}  // namespace lake::janitor
