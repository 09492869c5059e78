#include "signcast/crypto/bytes.hpp"

#include "signcast/errors.hpp"

namespace signcast {
namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string ToHex(ByteSpan data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw DecodeError("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = HexValue(hex[2 * i]);
    int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw DecodeError("invalid hex character");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

void ByteWriter::PutU32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void ByteWriter::PutU64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void ByteWriter::PutBlob(ByteSpan data) {
  PutU32(static_cast<std::uint32_t>(data.size()));
  PutRaw(data);
}

std::uint8_t ByteReader::GetU8() { return GetRaw(1)[0]; }

std::uint32_t ByteReader::GetU32() {
  ByteSpan raw = GetRaw(4);
  std::uint32_t v = 0;
  for (std::uint8_t b : raw) v = (v << 8) | b;
  return v;
}

std::uint64_t ByteReader::GetU64() {
  ByteSpan raw = GetRaw(8);
  std::uint64_t v = 0;
  for (std::uint8_t b : raw) v = (v << 8) | b;
  return v;
}

ByteSpan ByteReader::GetRaw(std::size_t n) {
  if (remaining() < n) throw DecodeError("unexpected end of input");
  ByteSpan out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

ByteSpan ByteReader::GetBlob(std::size_t max_len) {
  std::uint32_t len = GetU32();
  if (len > max_len) throw DecodeError("length prefix exceeds limit");
  return GetRaw(len);
}

void ByteReader::ExpectEnd() const {
  if (remaining() != 0) throw DecodeError("trailing bytes after encoding");
}

}  // namespace signcast
