#pragma once

// AES-256-CBC envelope for message payloads: random 16-byte IV, PKCS#7.

#include <nlohmann/json.hpp>

#include <array>
#include <cstddef>
#include <cstdint>

#include "signcast/crypto/bytes.hpp"
#include "signcast/crypto/rng.hpp"
#include "signcast/errors.hpp"

namespace signcast::absc {

inline constexpr std::size_t kSymKeySize = 32;
inline constexpr std::size_t kIvSize = 16;
inline constexpr std::size_t kBlockSize = 16;

// Decryption produced invalid padding (wrong key or corrupted body).
class PaddingError : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

struct MessageCiphertext {
  std::array<std::uint8_t, kIvSize> iv{};
  Bytes body;  // non-empty, multiple of 16

  void EncodeTo(ByteWriter& w) const;
  Bytes Encode() const;
  static MessageCiphertext Decode(ByteReader& r);

  nlohmann::json ToJson() const;
  static MessageCiphertext FromJson(const nlohmann::json& j);

  friend bool operator==(const MessageCiphertext&, const MessageCiphertext&) = default;
};

MessageCiphertext SymEncrypt(ByteSpan key, ByteSpan msg, Rng& rng);
MessageCiphertext SymEncryptWithIv(ByteSpan key, const std::array<std::uint8_t, kIvSize>& iv, ByteSpan msg);
// Throws PaddingError on a padding failure, ArgumentError on a bad key size.
Bytes SymDecrypt(ByteSpan key, const MessageCiphertext& ct);

}  // namespace signcast::absc
