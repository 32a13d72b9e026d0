#pragma once

#include <string>
#include <string_view>

namespace lake::governance {

/// scrypt cost. N = 2^log_n; memory is roughly 128 * N * r bytes.
struct ScryptParams {
  unsigned log_n = 15;
  unsigned r = 8;
  unsigned p = 1;
};

/// Salted, memory-hard one-way password digests.
/// Encoded form: "$scrypt$ln=<log_n>,r=<r>,p=<p>$<salt>$<digest>" (base64url, unpadded).
class PasswordHasher {
 public:
  explicit PasswordHasher(ScryptParams params = {}) : params_(params) {}

  std::string hash(std::string_view password) const;
  /// Verifies against the parameters embedded in `encoded`, so digests stay
  /// valid after the configured cost changes.
  bool verify(std::string_view password, std::string_view encoded) const;

 private:
  ScryptParams params_;
};

}  // namespace lake::governance
