#include "lake/governance/vault.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <chrono>
#include <cstdlib>
#include <memory>

#include <spdlog/spdlog.h>

namespace lake::governance {

namespace {

constexpr std::uint8_t kVersion = 0x80;
constexpr std::size_t kHeaderSize = 1 + 8 + 16;
constexpr std::size_t kMacSize = 32;

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};

std::array<std::uint8_t, kMacSize> hmac_sha256(std::span<const std::uint8_t> key,
                                               std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, kMacSize> mac{};
  unsigned int len = 0;
  if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(),
            mac.data(), &len) ||
      len != kMacSize) {
    fail(ErrorCode::kInternal, "vault: HMAC failure");
  }
  return mac;
}

Bytes aes128_cbc(bool encrypt, std::span<const std::uint8_t> key, std::span<const std::uint8_t> iv,
                 std::span<const std::uint8_t> input) {
  std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter> ctx(EVP_CIPHER_CTX_new());
  if (!ctx || EVP_CipherInit_ex(ctx.get(), EVP_aes_128_cbc(), nullptr, key.data(), iv.data(),
                                encrypt ? 1 : 0) != 1) {
    fail(ErrorCode::kInternal, "vault: cipher init failure");
  }
  Bytes out(input.size() + 16);
  int n1 = 0;
  int n2 = 0;
  if (EVP_CipherUpdate(ctx.get(), out.data(), &n1, input.data(), static_cast<int>(input.size())) != 1 ||
      EVP_CipherFinal_ex(ctx.get(), out.data() + n1, &n2) != 1) {
    secure_wipe(out);
    throw IntegrityError("vault: token is corrupt");
  }
  out.resize(static_cast<std::size_t>(n1 + n2));
  return out;
}

}  // namespace

Vault::Vault(std::string_view key) {
  auto raw = base64url_decode(key);
  if (!raw || raw->size() != 32) {
    if (raw) secure_wipe(*raw);
    fail(ErrorCode::kValidation, "vault: key must be url-safe base64 of 32 bytes");
  }
  std::copy_n(raw->begin(), 16, signing_key_.begin());
  std::copy_n(raw->begin() + 16, 16, encryption_key_.begin());
  secure_wipe(*raw);
}

Vault::~Vault() {
  secure_wipe(signing_key_);
  secure_wipe(encryption_key_);
}

Vault Vault::from_environment(bool dev_insecure) {
  if (const char* key = std::getenv(std::string(kSecretKeyEnv).c_str()); key && *key) {
    return Vault(key);
  }
  if (!dev_insecure) {
    fail(ErrorCode::kValidation, std::string(kSecretKeyEnv) +
                                     " is not set; refusing to start (pass --dev-insecure for an "
                                     "ephemeral key)");
  }
  spdlog::warn("{} not set; using an ephemeral key, sealed credentials will not survive a restart",
               kSecretKeyEnv);
  return Vault(generate_key());
}

std::string Vault::generate_key() {
  auto raw = random_bytes(32);
  auto key = base64url_encode(raw);
  secure_wipe(raw);
  return key;
}

std::string Vault::seal(std::span<const std::uint8_t> plaintext) const {
  const auto now = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  const auto iv = random_bytes(16);
  return seal_with(plaintext, static_cast<std::uint64_t>(now), std::span<const std::uint8_t, 16>(iv.data(), 16));
}

std::string Vault::seal_with(std::span<const std::uint8_t> plaintext, std::uint64_t timestamp,
                             std::span<const std::uint8_t, 16> iv) const {
  if (plaintext.empty()) fail(ErrorCode::kValidation, "vault: refusing to seal an empty secret");
  Bytes token;
  token.reserve(kHeaderSize + plaintext.size() + 16 + kMacSize);
  token.push_back(kVersion);
  for (int shift = 56; shift >= 0; shift -= 8) token.push_back(static_cast<std::uint8_t>(timestamp >> shift));
  token.insert(token.end(), iv.begin(), iv.end());
  const auto ciphertext = aes128_cbc(true, encryption_key_, iv, plaintext);
  token.insert(token.end(), ciphertext.begin(), ciphertext.end());
  const auto mac = hmac_sha256(signing_key_, token);
  token.insert(token.end(), mac.begin(), mac.end());
  return base64url_encode(token);
}

Bytes Vault::open(std::string_view token) const {
  const auto raw = base64url_decode(token);
  if (!raw || raw->size() < kHeaderSize + 16 + kMacSize || (*raw)[0] != kVersion ||
      (raw->size() - kHeaderSize - kMacSize) % 16 != 0) {
    throw IntegrityError("vault: token is malformed");
  }
  const std::span<const std::uint8_t> all(*raw);
  const auto signed_part = all.first(all.size() - kMacSize);
  const auto expected = hmac_sha256(signing_key_, signed_part);
  if (!constant_time_equal(expected, all.last(kMacSize))) {
    throw IntegrityError("vault: token failed authentication");
  }
  return aes128_cbc(false, encryption_key_, all.subspan(9, 16),
                    signed_part.subspan(kHeaderSize));
}

}  // namespace lake::governance
