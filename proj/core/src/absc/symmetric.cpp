#include "signcast/absc/symmetric.hpp"

#include <openssl/evp.h>

#include <limits>
#include <memory>
#include <string>

namespace signcast::absc {
namespace {

constexpr std::size_t kMaxBody = std::size_t{1} << 30;

using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)>;

CipherCtx NewCtx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
  if (!ctx) throw Error("EVP_CIPHER_CTX_new failed");
  return ctx;
}

void CheckKey(ByteSpan key) {
  if (key.size() != kSymKeySize) throw ArgumentError("symmetric key must be 32 bytes");
}

int ChunkLen(std::size_t n) {
  if (n > static_cast<std::size_t>(std::numeric_limits<int>::max() - 32)) throw ArgumentError("payload too large");
  return static_cast<int>(n);
}

}  // namespace

void MessageCiphertext::EncodeTo(ByteWriter& w) const {
  w.PutRaw(iv);
  w.PutBlob(body);
}

Bytes MessageCiphertext::Encode() const {
  ByteWriter w;
  EncodeTo(w);
  return std::move(w).Take();
}

MessageCiphertext MessageCiphertext::Decode(ByteReader& r) {
  MessageCiphertext ct;
  ByteSpan iv = r.GetRaw(kIvSize);
  std::copy(iv.begin(), iv.end(), ct.iv.begin());
  ByteSpan body = r.GetBlob(kMaxBody);
  if (body.empty() || body.size() % kBlockSize != 0) throw DecodeError("cipher body length not a positive multiple of 16");
  ct.body.assign(body.begin(), body.end());
  return ct;
}

nlohmann::json MessageCiphertext::ToJson() const {
  return {{"iv", ToHex(iv)}, {"body", ToHex(body)}};
}

MessageCiphertext MessageCiphertext::FromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("iv") || !j.contains("body") || !j["iv"].is_string() || !j["body"].is_string()) {
    throw DecodeError("message ciphertext JSON needs iv and body");
  }
  MessageCiphertext ct;
  Bytes iv = FromHex(j["iv"].get<std::string>());
  if (iv.size() != kIvSize) throw DecodeError("iv must be 16 bytes");
  std::copy(iv.begin(), iv.end(), ct.iv.begin());
  ct.body = FromHex(j["body"].get<std::string>());
  if (ct.body.empty() || ct.body.size() % kBlockSize != 0) throw DecodeError("cipher body length not a positive multiple of 16");
  return ct;
}

MessageCiphertext SymEncrypt(ByteSpan key, ByteSpan msg, Rng& rng) {
  std::array<std::uint8_t, kIvSize> iv{};
  rng.Fill(iv);
  return SymEncryptWithIv(key, iv, msg);
}

MessageCiphertext SymEncryptWithIv(ByteSpan key, const std::array<std::uint8_t, kIvSize>& iv, ByteSpan msg) {
  CheckKey(key);
  CipherCtx ctx = NewCtx();
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr, key.data(), iv.data()) != 1) {
    throw Error("AES-256-CBC init failed");
  }
  MessageCiphertext ct;
  ct.iv = iv;
  ct.body.resize(msg.size() + kBlockSize);
  int written = 0;
  if (EVP_EncryptUpdate(ctx.get(), ct.body.data(), &written, msg.data(), ChunkLen(msg.size())) != 1) {
    throw Error("AES-256-CBC encrypt failed");
  }
  int tail = 0;
  if (EVP_EncryptFinal_ex(ctx.get(), ct.body.data() + written, &tail) != 1) throw Error("AES-256-CBC finalize failed");
  ct.body.resize(static_cast<std::size_t>(written + tail));
  return ct;
}

Bytes SymDecrypt(ByteSpan key, const MessageCiphertext& ct) {
  CheckKey(key);
  if (ct.body.empty() || ct.body.size() % kBlockSize != 0) throw PaddingError("cipher body length invalid");
  CipherCtx ctx = NewCtx();
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr, key.data(), ct.iv.data()) != 1) {
    throw Error("AES-256-CBC init failed");
  }
  Bytes out(ct.body.size() + kBlockSize);
  int written = 0;
  if (EVP_DecryptUpdate(ctx.get(), out.data(), &written, ct.body.data(), ChunkLen(ct.body.size())) != 1) {
    throw PaddingError("AES-256-CBC decrypt failed");
  }
  int tail = 0;
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + written, &tail) != 1) throw PaddingError("bad PKCS#7 padding");
  out.resize(static_cast<std::size_t>(written + tail));
  return out;
}

}  // namespace signcast::absc
