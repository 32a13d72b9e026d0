#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace lake::cli {

/// Environment lookup; injectable for tests.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_environment();

inline constexpr std::string_view kDefaultBaseUrl = "http://127.0.0.1:8080";

struct Profile {
  std::string name = "default";
  std::string base_url = std::string(kDefaultBaseUrl);
  std::optional<std::string> token;
  /// "table" or "json".
  std::string output = "table";
};

/// Profiles file: $LAKE_CONFIG_DIR/profiles.json, else
/// $XDG_CONFIG_HOME/lake/profiles.json, else ~/.config/lake/profiles.json.
/// Written with owner-only permissions.
class ProfileStore {
 public:
  explicit ProfileStore(std::filesystem::path file) : file_(std::move(file)) {}
  static std::filesystem::path default_path(const EnvLookup& env);

  /// A missing file or profile yields defaults.
  Profile load(const std::string& name) const;
  void save(const Profile& profile) const;

  const std::filesystem::path& path() const { return file_; }

 private:
  std::filesystem::path file_;
};

}  // namespace lake::cli
