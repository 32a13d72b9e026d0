#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lake {

using Bytes = std::vector<std::uint8_t>;

/// Cryptographically random bytes (OpenSSL DRBG).
Bytes random_bytes(std::size_t n);

/// 32 hex chars of fresh randomness; used for every opaque identifier.
std::string new_id();

/// 64 hex chars; used for bearer tokens, ticket and grant ids.
std::string new_secret_token();

std::string to_hex(std::span<const std::uint8_t> bytes);

std::string base64url_encode(std::span<const std::uint8_t> bytes, bool pad = true);
std::optional<Bytes> base64url_decode(std::string_view text);

std::string sha256_hex(std::string_view data);

bool constant_time_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Overwrites the buffer before release; used for transient key material.
void secure_wipe(std::span<std::uint8_t> bytes);
void secure_wipe(std::string& s);

}  // namespace lake
