#include "lake/common/types.hpp"

namespace lake {

std::string_view to_string(StorageType t) {
  switch (t) {
    case StorageType::kLocal: return "local";
    case StorageType::kS3Compatible: return "s3-compatible";
    case StorageType::kGcsCompatible: return "gcs-compatible";
    case StorageType::kHdfsCompatible: return "hdfs-compatible";
  }
  return "local";
}

std::string_view to_string(FileCategory c) {
  return c == FileCategory::kStructured ? "structured" : "unstructured";
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::kConsumer: return "consumer";
    case Role::kPublisher: return "publisher";
    case Role::kDataManager: return "data-manager";
  }
  return "consumer";
}

std::optional<StorageType> parse_storage_type(std::string_view s) {
  if (s == "local") return StorageType::kLocal;
  if (s == "s3-compatible") return StorageType::kS3Compatible;
  if (s == "gcs-compatible") return StorageType::kGcsCompatible;
  if (s == "hdfs-compatible") return StorageType::kHdfsCompatible;
  return std::nullopt;
}

std::optional<FileCategory> parse_file_category(std::string_view s) {
  if (s == "structured") return FileCategory::kStructured;
  if (s == "unstructured") return FileCategory::kUnstructured;
  return std::nullopt;
}

std::optional<Role> parse_role(std::string_view s) {
  if (s == "consumer") return Role::kConsumer;
  if (s == "publisher") return Role::kPublisher;
  if (s == "data-manager") return Role::kDataManager;
  return std::nullopt;
}

}  // namespace lake
