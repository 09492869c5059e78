#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>

#include "signcast/crypto/hash.hpp"

namespace signcast {

// Source of random bytes. Implementations are not thread-safe; give each
// thread its own stream.
class Rng {
 public:
  virtual ~Rng() = default;
  virtual void Fill(std::span<std::uint8_t> out) = 0;

  std::uint64_t NextU64();
  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t Uniform(std::uint64_t bound);
};

// Operating-system entropy (OpenSSL RAND_bytes).
class OsRng final : public Rng {
 public:
  void Fill(std::span<std::uint8_t> out) override;
};

// ChaCha20 keystream keyed by a 32-byte seed. Identical seeds give identical
// streams on every platform.
class SeededRng final : public Rng {
 public:
  explicit SeededRng(std::uint64_t seed);
  explicit SeededRng(const Digest256& key);
  ~SeededRng() override;
  SeededRng(SeededRng&&) noexcept;
  SeededRng& operator=(SeededRng&&) noexcept;

  void Fill(std::span<std::uint8_t> out) override;

  // Independent child stream; the parent stream is not advanced.
  SeededRng Derive(std::string_view label) const;

 private:
  struct Impl;
  Digest256 key_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace signcast
