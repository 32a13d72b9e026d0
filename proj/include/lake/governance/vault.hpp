#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "lake/common/encoding.hpp"
#include "lake/common/error.hpp"

namespace lake::governance {

/// Raised when a sealed token fails authentication or is malformed.
class IntegrityError : public Error {
 public:
  explicit IntegrityError(std::string message) : Error(ErrorCode::kInternal, std::move(message)) {}
};

/// Name of the environment variable that carries the deployment key.
inline constexpr std::string_view kSecretKeyEnv = "LAKEHOUSE_SECRET_KEY";

/// Authenticated symmetric encryption for storage access keys.
///
/// Tokens use the Fernet layout so keys sealed here can be opened by any
/// Fernet implementation and vice versa:
///
///   0x80 | timestamp (u64 BE seconds) | IV (16) | AES-128-CBC(PKCS#7) | HMAC-SHA256 (32)
///
/// base64url-encoded. The 32-byte key is split into a signing half and an
/// encryption half.
class Vault {
 public:
  /// `key` is the url-safe base64 encoding of 32 bytes.
  explicit Vault(std::string_view key);
  ~Vault();

  Vault(const Vault&) = delete;
  Vault& operator=(const Vault&) = delete;

  /// Reads LAKEHOUSE_SECRET_KEY. Without it, startup fails unless
  /// `dev_insecure` is set, in which case an ephemeral key is generated.
  static Vault from_environment(bool dev_insecure);
  static std::string generate_key();

  std::string seal(std::span<const std::uint8_t> plaintext) const;
  std::string seal(std::string_view plaintext) const { return seal(as_bytes(plaintext)); }

  /// Sealing with caller-chosen timestamp and IV; only for known-answer tests.
  std::string seal_with(std::span<const std::uint8_t> plaintext, std::uint64_t timestamp,
                        std::span<const std::uint8_t, 16> iv) const;

  Bytes open(std::string_view token) const;

 private:
  std::array<std::uint8_t, 16> signing_key_{};
  std::array<std::uint8_t, 16> encryption_key_{};
};

}  // namespace lake::governance
