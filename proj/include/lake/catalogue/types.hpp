#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lake/common/clock.hpp"
#include "lake/common/types.hpp"

namespace lake::catalogue {

struct Collection {
  std::string id;
  std::string name;
  StorageType storage_type = StorageType::kLocal;
  std::string bucket;
  std::string owner_id;
  std::string visa_id;
  Timestamp created_at;
};

enum class FileStatus { kPending, kCommitted };
enum class VersionOrigin { kAuto, kManual };

std::string_view to_string(FileStatus s);
std::string_view to_string(VersionOrigin o);
std::optional<FileStatus> parse_file_status(std::string_view s);

/// Identity of a file lineage across versions. file_name matching is
/// case-sensitive.
struct DedupKey {
  std::string file_name;
  std::string collection_id;
  FileCategory file_category = FileCategory::kUnstructured;
  std::string bucket;

  friend bool operator==(const DedupKey&, const DedupKey&) = default;
};

struct FileRecord {
  std::string id;
  std::string collection_id;
  std::string collection_name;
  std::string file_name;
  FileCategory file_category = FileCategory::kUnstructured;
  std::string bucket;
  std::uint64_t version = 0;
  VersionOrigin version_origin = VersionOrigin::kAuto;
  std::string storage_path;
  FileStatus status = FileStatus::kPending;
  std::optional<std::uint64_t> size_bytes;
  std::optional<std::string> checksum;
  std::string uploaded_by;
  Timestamp requested_at;
  std::optional<Timestamp> committed_at;

  DedupKey key() const { return {file_name, collection_id, file_category, bucket}; }
};

/// "<collection_name>/v<version>/<file_name>"
std::string storage_path_for(std::string_view collection_name, std::uint64_t version, std::string_view file_name);

/// Names embedded in object paths: [A-Za-z0-9._-]{1,128}, not "." or "..".
bool is_valid_collection_name(std::string_view name);
/// Any printable name without path separators, 1..255 bytes, not "." or "..".
bool is_valid_file_name(std::string_view name);

inline constexpr std::uint64_t kMaxVersion = 1'000'000'000;

struct Page {
  static constexpr std::size_t kDefaultLimit = 100;
  static constexpr std::size_t kMaxLimit = 1000;

  std::size_t offset = 0;
  std::size_t limit = kDefaultLimit;
};

template <class T>
struct Listing {
  std::vector<T> items;
  std::size_t total = 0;
  Page page;
};

template <class T>
Listing<T> paginate(std::vector<T> all, Page page) {
  Listing<T> out;
  out.total = all.size();
  out.page = page;
  if (page.offset < all.size()) {
    const auto end = std::min(all.size(), page.offset + page.limit);
    out.items.assign(std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(page.offset)),
                     std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(end)));
  }
  return out;
}

nlohmann::json to_public_json(const Collection& c);
nlohmann::json to_public_json(const FileRecord& r);

nlohmann::json to_document(const Collection& c);
Collection collection_from_document(const nlohmann::json& d);
nlohmann::json to_document(const FileRecord& r);
FileRecord file_from_document(const nlohmann::json& d);

}  // namespace lake::catalogue
