#include "signcast/crypto/rng.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <array>
#include <limits>
#include <vector>

#include "signcast/errors.hpp"

namespace signcast {

std::uint64_t Rng::NextU64() {
  std::array<std::uint8_t, 8> buf{};
  Fill(buf);
  std::uint64_t v = 0;
  for (std::uint8_t b : buf) v = (v << 8) | b;
  return v;
}

std::uint64_t Rng::Uniform(std::uint64_t bound) {
  if (bound == 0) throw ArgumentError("Uniform bound must be positive");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = NextU64();
  } while (v >= limit);
  return v % bound;
}

void OsRng::Fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error("RAND_bytes failed");
  }
}

struct SeededRng::Impl {
  EVP_CIPHER_CTX* ctx = nullptr;
  ~Impl() { EVP_CIPHER_CTX_free(ctx); }
};

namespace {

Digest256 SeedKey(std::uint64_t seed) {
  ByteWriter w;
  w.PutRaw(AsBytes("signcast/seeded-rng/v1"));
  w.PutU64(seed);
  return Sha256(w.bytes());
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed) : SeededRng(SeedKey(seed)) {}

SeededRng::SeededRng(const Digest256& key) : key_(key), impl_(std::make_unique<Impl>()) {
  impl_->ctx = EVP_CIPHER_CTX_new();
  std::array<std::uint8_t, 16> iv{};  // 32-bit block counter then 96-bit nonce, all zero
  if (impl_->ctx == nullptr ||
      EVP_EncryptInit_ex(impl_->ctx, EVP_chacha20(), nullptr, key_.bytes.data(), iv.data()) != 1) {
    throw Error("ChaCha20 initialisation failed");
  }
}

SeededRng::~SeededRng() = default;
SeededRng::SeededRng(SeededRng&&) noexcept = default;
SeededRng& SeededRng::operator=(SeededRng&&) noexcept = default;

void SeededRng::Fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  std::vector<std::uint8_t> zeros(out.size(), 0);
  int len = 0;
  if (EVP_EncryptUpdate(impl_->ctx, out.data(), &len, zeros.data(), static_cast<int>(zeros.size())) != 1 ||
      static_cast<std::size_t>(len) != out.size()) {
    throw Error("ChaCha20 keystream failed");
  }
}

SeededRng SeededRng::Derive(std::string_view label) const {
  Sha256Hasher h;
  h.Update(AsBytes("signcast/seeded-rng/derive")).Update(key_.span()).Update(label);
  return SeededRng(h.Finish());
}

}  // namespace signcast
