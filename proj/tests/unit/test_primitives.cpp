#include <gtest/gtest.h>

#include <set>

#include "signcast/absc/symmetric.hpp"
#include "signcast/crypto/bytes.hpp"
#include "signcast/crypto/hash.hpp"
#include "signcast/crypto/rng.hpp"

namespace signcast {
namespace {

// FIPS 180-2 examples.
TEST(Sha256, KnownAnswers) {
  EXPECT_EQ(Sha256(std::string_view("")).ToHex(),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256(std::string_view("abc")).ToHex(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Sha256(std::string_view("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")).ToHex(),
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST(Sha256, MillionAs) {
  Sha256Hasher h;
  const std::string chunk(1000, 'a');
  for (int i = 0; i < 1000; ++i) h.Update(chunk);
  EXPECT_EQ(h.Finish().ToHex(), "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST(Sha256, IncrementalMatchesOneShot) {
  SeededRng rng(3);
  for (int n : {0, 1, 55, 56, 63, 64, 65, 1000}) {
    Bytes data(static_cast<std::size_t>(n));
    rng.Fill(data);
    Sha256Hasher h;
    const std::size_t cut = data.size() / 3;
    h.Update(ByteSpan(data).first(cut)).Update(ByteSpan(data).subspan(cut));
    EXPECT_EQ(h.Finish(), Sha256(data)) << n;
  }
}

TEST(Hex, RoundTripAndRejects) {
  const Bytes b{0x00, 0x01, 0xab, 0xff};
  EXPECT_EQ(ToHex(b), "0001abff");
  EXPECT_EQ(FromHex("0001abff"), b);
  EXPECT_EQ(FromHex("0001ABFF"), b);
  EXPECT_THROW(FromHex("abc"), DecodeError);
  EXPECT_THROW(FromHex("zz"), DecodeError);
  EXPECT_THROW(Digest256::FromHex("00"), DecodeError);
}

TEST(ByteReader, BoundsAndTrailing) {
  ByteWriter w;
  w.PutU32(7);
  w.PutU64(0x0102030405060708ull);
  w.PutBlob(AsBytes("xyz"));
  const Bytes bytes = std::move(w).Take();
  ByteReader r(bytes);
  EXPECT_EQ(r.GetU32(), 7u);
  EXPECT_EQ(r.GetU64(), 0x0102030405060708ull);
  const auto blob = r.GetBlob(3);
  EXPECT_EQ(std::string(blob.begin(), blob.end()), "xyz");
  EXPECT_NO_THROW(r.ExpectEnd());
  EXPECT_THROW(r.GetU8(), DecodeError);

  ByteReader limited(bytes);
  limited.GetU32();
  limited.GetU64();
  EXPECT_THROW(limited.GetBlob(2), DecodeError);

  ByteReader trailing(bytes);
  trailing.GetU32();
  EXPECT_THROW(trailing.ExpectEnd(), DecodeError);
}

TEST(SeededRng, DeterministicAndDerivedStreamsDiffer) {
  SeededRng a(42), b(42), c(43);
  Bytes x(64), y(64), z(64);
  a.Fill(x);
  b.Fill(y);
  c.Fill(z);
  EXPECT_EQ(x, y);
  EXPECT_NE(x, z);

  SeededRng root(42);
  Bytes d1(32), d2(32), d1again(32);
  root.Derive("one").Fill(d1);
  root.Derive("two").Fill(d2);
  root.Derive("one").Fill(d1again);
  EXPECT_EQ(d1, d1again);
  EXPECT_NE(d1, d2);

  // Deriving does not advance the parent.
  SeededRng p1(9), p2(9);
  (void)p1.Derive("x");
  EXPECT_EQ(p1.NextU64(), p2.NextU64());
}

TEST(SeededRng, SplitFillsEqualOneFill) {
  SeededRng a(5), b(5);
  Bytes whole(100), parts(100);
  a.Fill(whole);
  b.Fill(std::span(parts).first(37));
  b.Fill(std::span(parts).subspan(37));
  EXPECT_EQ(whole, parts);
}

TEST(Rng, UniformStaysInBoundAndCoversSmallRange) {
  SeededRng rng(11);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.Uniform(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_THROW(rng.Uniform(0), ArgumentError);
}

TEST(OsRng, ProducesDistinctOutput) {
  OsRng rng;
  Bytes a(32), b(32);
  rng.Fill(a);
  rng.Fill(b);
  EXPECT_NE(a, b);
}

// NIST SP 800-38A F.2.5, CBC-AES256.Encrypt, first two blocks. PKCS#7 adds a
// full padding block after them.
TEST(Aes256Cbc, NistVector) {
  const Bytes key = FromHex("603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4");
  std::array<std::uint8_t, absc::kIvSize> iv{};
  for (std::size_t i = 0; i < iv.size(); ++i) iv[i] = static_cast<std::uint8_t>(i);
  const Bytes pt = FromHex("6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e51");
  const auto ct = absc::SymEncryptWithIv(key, iv, pt);
  ASSERT_EQ(ct.body.size(), 48u);
  EXPECT_EQ(ToHex(ByteSpan(ct.body).first(32)),
            "f58c4c04d6e5f1ba779eabfb5f7bfbd69cfc4e967edb808d679f777bc6702c7d");
  EXPECT_EQ(absc::SymDecrypt(key, ct), pt);
}

TEST(Aes256Cbc, RoundTripAllLengthsAroundBlocks) {
  SeededRng rng(1);
  Bytes key(absc::kSymKeySize);
  rng.Fill(key);
  for (std::size_t n = 1; n <= 49; ++n) {
    Bytes msg(n);
    rng.Fill(msg);
    const auto ct = absc::SymEncrypt(key, msg, rng);
    EXPECT_EQ(ct.body.size(), (n / 16 + 1) * 16);
    EXPECT_EQ(absc::SymDecrypt(key, ct), msg);
  }
}

TEST(Aes256Cbc, WrongKeyOrBadSizesRejected) {
  SeededRng rng(2);
  Bytes key(absc::kSymKeySize), other(absc::kSymKeySize);
  rng.Fill(key);
  rng.Fill(other);
  const Bytes msg(20, 0x5a);
  const auto ct = absc::SymEncrypt(key, msg, rng);
  // A wrong key decrypts to garbage; PKCS#7 catches it almost always, and a
  // lucky pad still cannot give back the message.
  try {
    EXPECT_NE(absc::SymDecrypt(other, ct), msg);
  } catch (const absc::PaddingError&) {
  }
  EXPECT_THROW(absc::SymDecrypt(Bytes(16), ct), ArgumentError);
  auto truncated = ct;
  truncated.body.resize(15);
  EXPECT_THROW(absc::SymDecrypt(key, truncated), DecodeError);
}

TEST(MessageCiphertext, EncodingRoundTrips) {
  SeededRng rng(4);
  Bytes key(absc::kSymKeySize);
  rng.Fill(key);
  const auto ct = absc::SymEncrypt(key, AsBytes("hello"), rng);
  const Bytes enc = ct.Encode();
  ByteReader r(enc);
  EXPECT_EQ(absc::MessageCiphertext::Decode(r), ct);
  EXPECT_EQ(absc::MessageCiphertext::FromJson(ct.ToJson()), ct);
}

}  // namespace
}  // namespace signcast
