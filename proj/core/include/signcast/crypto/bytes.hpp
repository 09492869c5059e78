#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace signcast {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

std::string ToHex(ByteSpan data);
// Throws DecodeError on odd length or non-hex characters.
Bytes FromHex(std::string_view hex);

inline ByteSpan AsBytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Big-endian append-only writer used by every canonical encoding.
class ByteWriter {
 public:
  void PutU8(std::uint8_t v) { out_.push_back(v); }
  void PutU32(std::uint32_t v);
  void PutU64(std::uint64_t v);
  void PutRaw(ByteSpan data) { out_.insert(out_.end(), data.begin(), data.end()); }
  // u32 length prefix followed by the bytes.
  void PutBlob(ByteSpan data);

  const Bytes& bytes() const& { return out_; }
  Bytes Take() && { return std::move(out_); }

 private:
  Bytes out_;
};

// Cursor over a byte span. Every getter throws DecodeError when the input is
// exhausted.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  std::uint8_t GetU8();
  std::uint32_t GetU32();
  std::uint64_t GetU64();
  ByteSpan GetRaw(std::size_t n);
  ByteSpan GetBlob(std::size_t max_len);

  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t offset() const { return pos_; }
  // Throws DecodeError unless every byte was consumed.
  void ExpectEnd() const;

 private:
  ByteSpan data_;
  std::size_t pos_ = 0;
};

}  // namespace signcast
