#include "lake/governance/password.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <vector>

#include <fmt/format.h>

#include "lake/common/encoding.hpp"
#include "lake/common/error.hpp"

namespace lake::governance {

namespace {

constexpr std::size_t kSaltSize = 16;
constexpr std::size_t kDigestSize = 32;
constexpr std::uint64_t kMaxMemory = 1ull << 30;

Bytes derive(std::string_view password, std::span<const std::uint8_t> salt, const ScryptParams& p) {
  Bytes out(kDigestSize);
  if (EVP_PBE_scrypt(password.data(), password.size(), salt.data(), salt.size(), 1ull << p.log_n, p.r,
                     p.p, kMaxMemory, out.data(), out.size()) != 1) {
    fail(ErrorCode::kInternal, "password hashing failed");
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

bool parse_param(std::string_view token, std::string_view name, unsigned& out) {
  if (token.size() <= name.size() + 1 || token.substr(0, name.size()) != name || token[name.size()] != '=') {
    return false;
  }
  const auto value = token.substr(name.size() + 1);
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  return ec == std::errc{} && ptr == value.data() + value.size();
}

}  // namespace

std::string PasswordHasher::hash(std::string_view password) const {
  const auto salt = random_bytes(kSaltSize);
  const auto digest = derive(password, salt, params_);
  return fmt::format("$scrypt$ln={},r={},p={}${}${}", params_.log_n, params_.r, params_.p,
                     base64url_encode(salt, false), base64url_encode(digest, false));
}

bool PasswordHasher::verify(std::string_view password, std::string_view encoded) const {
  const auto parts = split(encoded, '$');
  if (parts.size() != 5 || !parts[0].empty() || parts[1] != "scrypt") return false;
  const auto params = split(parts[2], ',');
  ScryptParams p;
  if (params.size() != 3 || !parse_param(params[0], "ln", p.log_n) || !parse_param(params[1], "r", p.r) ||
      !parse_param(params[2], "p", p.p) || p.log_n == 0 || p.log_n > 24) {
    return false;
  }
  const auto salt = base64url_decode(parts[3]);
  const auto digest = base64url_decode(parts[4]);
  if (!salt || !digest || digest->size() != kDigestSize) return false;
  return constant_time_equal(derive(password, *salt, p), *digest);
}

}  // namespace lake::governance
