#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace lake {

enum class StorageType { kLocal, kS3Compatible, kGcsCompatible, kHdfsCompatible };
enum class FileCategory { kStructured, kUnstructured };
enum class Role { kConsumer, kPublisher, kDataManager };

std::string_view to_string(StorageType t);
std::string_view to_string(FileCategory c);
std::string_view to_string(Role r);

std::optional<StorageType> parse_storage_type(std::string_view s);
std::optional<FileCategory> parse_file_category(std::string_view s);
std::optional<Role> parse_role(std::string_view s);

}  // namespace lake
