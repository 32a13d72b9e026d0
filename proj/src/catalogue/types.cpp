#include "lake/catalogue/types.hpp"

#include <algorithm>
#include <cctype>

namespace lake::catalogue {

using nlohmann::json;

std::string_view to_string(FileStatus s) { return s == FileStatus::kPending ? "pending" : "committed"; }

std::string_view to_string(VersionOrigin o) { return o == VersionOrigin::kAuto ? "auto" : "manual"; }

std::optional<FileStatus> parse_file_status(std::string_view s) {
  if (s == "pending") return FileStatus::kPending;
  if (s == "committed") return FileStatus::kCommitted;
  return std::nullopt;
}

std::string storage_path_for(std::string_view collection_name, std::uint64_t version, std::string_view file_name) {
  std::string path;
  path.reserve(collection_name.size() + file_name.size() + 24);
  path.append(collection_name).append("/v").append(std::to_string(version)).append("/").append(file_name);
  return path;
}

bool is_valid_collection_name(std::string_view name) {
  if (name.empty() || name.size() > 128 || name == "." || name == "..") return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '.' || c == '_' || c == '-';
  });
}

bool is_valid_file_name(std::string_view name) {
  if (name.empty() || name.size() > 255 || name == "." || name == "..") return false;
  // A leading ".upload-" would collide with the local backend's temp files.
  if (name.rfind(".upload-", 0) == 0) return false;
  return std::none_of(name.begin(), name.end(),
                      [](unsigned char c) { return c < 0x20 || c == 0x7f || c == '/' || c == '\\'; });
}

json to_public_json(const Collection& c) {
  return {{"id", c.id},
          {"name", c.name},
          {"storage_type", to_string(c.storage_type)},
          {"bucket", c.bucket},
          {"owner_id", c.owner_id},
          {"visa_id", c.visa_id},
          {"created_at", format_timestamp(c.created_at)}};
}

json to_document(const Collection& c) { return to_public_json(c); }

Collection collection_from_document(const json& d) {
  Collection c;
  c.id = d.at("id").get<std::string>();
  c.name = d.at("name").get<std::string>();
  c.storage_type = parse_storage_type(d.at("storage_type").get<std::string>()).value_or(StorageType::kLocal);
  c.bucket = d.at("bucket").get<std::string>();
  c.owner_id = d.at("owner_id").get<std::string>();
  c.visa_id = d.at("visa_id").get<std::string>();
  c.created_at = parse_timestamp(d.at("created_at").get<std::string>()).value_or(Timestamp{});
  return c;
}

json to_public_json(const FileRecord& r) {
  json j{{"id", r.id},
         {"collection_id", r.collection_id},
         {"file_name", r.file_name},
         {"file_category", to_string(r.file_category)},
         {"bucket", r.bucket},
         {"version", r.version},
         {"version_origin", to_string(r.version_origin)},
         {"storage_path", r.storage_path},
         {"status", to_string(r.status)},
         {"uploaded_by", r.uploaded_by},
         {"requested_at", format_timestamp(r.requested_at)}};
  j["size_bytes"] = r.size_bytes ? json(*r.size_bytes) : json(nullptr);
  j["checksum"] = r.checksum ? json(*r.checksum) : json(nullptr);
  j["committed_at"] = r.committed_at ? json(format_timestamp(*r.committed_at)) : json(nullptr);
  return j;
}

json to_document(const FileRecord& r) {
  json d = to_public_json(r);
  d["collection_name"] = r.collection_name;
  return d;
}

FileRecord file_from_document(const json& d) {
  FileRecord r;
  r.id = d.at("id").get<std::string>();
  r.collection_id = d.at("collection_id").get<std::string>();
  r.collection_name = d.at("collection_name").get<std::string>();
  r.file_name = d.at("file_name").get<std::string>();
  r.file_category = parse_file_category(d.at("file_category").get<std::string>()).value_or(FileCategory::kUnstructured);
  r.bucket = d.at("bucket").get<std::string>();
  r.version = d.at("version").get<std::uint64_t>();
  r.version_origin = d.at("version_origin").get<std::string>() == "manual" ? VersionOrigin::kManual : VersionOrigin::kAuto;
  r.storage_path = d.at("storage_path").get<std::string>();
  r.status = parse_file_status(d.at("status").get<std::string>()).value_or(FileStatus::kPending);
  if (d.contains("size_bytes") && d["size_bytes"].is_number()) r.size_bytes = d["size_bytes"].get<std::uint64_t>();
  if (d.contains("checksum") && d["checksum"].is_string()) r.checksum = d["checksum"].get<std::string>();
  r.uploaded_by = d.at("uploaded_by").get<std::string>();
  r.requested_at = parse_timestamp(d.at("requested_at").get<std::string>()).value_or(Timestamp{});
  if (d.contains("committed_at") && d["committed_at"].is_string()) {
    r.committed_at = parse_timestamp(d["committed_at"].get<std::string>());
  }
  return r;
}

}  // namespace lake::catalogue
