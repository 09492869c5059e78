#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "signcast/crypto/bytes.hpp"

namespace signcast {

// Output of H1 : {0,1}* -> {0,1}^256. Always exactly 32 bytes.
struct Digest256 {
  static constexpr std::size_t kSize = 32;
  std::array<std::uint8_t, kSize> bytes{};

  ByteSpan span() const { return bytes; }
  std::string ToHex() const;
  static Digest256 FromHex(std::string_view hex);
  static Digest256 FromSpan(ByteSpan data);
  bool IsZero() const;

  auto operator<=>(const Digest256&) const = default;
};

Digest256 Sha256(ByteSpan data);
inline Digest256 Sha256(std::string_view s) { return Sha256(AsBytes(s)); }

// Incremental SHA-256 for multi-part inputs.
class Sha256Hasher {
 public:
  Sha256Hasher();
  ~Sha256Hasher();
  Sha256Hasher(Sha256Hasher&&) noexcept;
  Sha256Hasher& operator=(Sha256Hasher&&) noexcept;

  Sha256Hasher& Update(ByteSpan data);
  Sha256Hasher& Update(std::string_view s) { return Update(AsBytes(s)); }
  Digest256 Finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace signcast
