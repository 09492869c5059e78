#include "signcast/crypto/hash.hpp"

#include <openssl/evp.h>

#include <algorithm>

#include "signcast/errors.hpp"

namespace signcast {

std::string Digest256::ToHex() const { return signcast::ToHex(bytes); }

Digest256 Digest256::FromHex(std::string_view hex) {
  return FromSpan(signcast::FromHex(hex));
}

Digest256 Digest256::FromSpan(ByteSpan data) {
  if (data.size() != kSize) throw DecodeError("digest must be 32 bytes");
  Digest256 d;
  std::copy(data.begin(), data.end(), d.bytes.begin());
  return d;
}

bool Digest256::IsZero() const {
  return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

struct Sha256Hasher::Impl {
  EVP_MD_CTX* ctx = nullptr;
  ~Impl() { EVP_MD_CTX_free(ctx); }
};

Sha256Hasher::Sha256Hasher() : impl_(std::make_unique<Impl>()) {
  impl_->ctx = EVP_MD_CTX_new();
  if (impl_->ctx == nullptr || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 initialisation failed");
  }
}

Sha256Hasher::~Sha256Hasher() = default;
Sha256Hasher::Sha256Hasher(Sha256Hasher&&) noexcept = default;
Sha256Hasher& Sha256Hasher::operator=(Sha256Hasher&&) noexcept = default;

Sha256Hasher& Sha256Hasher::Update(ByteSpan data) {
  if (EVP_DigestUpdate(impl_->ctx, data.data(), data.size()) != 1) {
    throw Error("SHA-256 update failed");
  }
  return *this;
}

Digest256 Sha256Hasher::Finish() {
  Digest256 out;
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(impl_->ctx, out.bytes.data(), &len) != 1 || len != Digest256::kSize) {
    throw Error("SHA-256 finalisation failed");
  }
  return out;
}

Digest256 Sha256(ByteSpan data) {
  Digest256 out;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.bytes.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  return out;
}

}  // namespace signcast
