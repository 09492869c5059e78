#pragma once

// Canonical encodings of signcrypted payloads.
//
// Binary ST:  profile u8 | policy blob | c_tilde[32] | C | u32 n |
//             n x (C_y | C'_y) | w | pi[20] | psi
// Binary CT:  iv[16] | u32 len | body
// Payload:    ST || CT
//
// Decoders are strict: one valid encoding per value, every element checked
// for group membership, no trailing bytes.

#include <nlohmann/json.hpp>

#include <utility>

#include "signcast/absc/scheme.hpp"

namespace signcast::absc {

void EncodeSignedCiphertext(const SignedCiphertext& st, ByteWriter& w);
Bytes EncodeSignedCiphertext(const SignedCiphertext& st);
SignedCiphertext DecodeSignedCiphertext(ByteReader& r);

nlohmann::json SignedCiphertextToJson(const SignedCiphertext& st);
SignedCiphertext SignedCiphertextFromJson(const nlohmann::json& j);

Bytes EncodePayload(const SignedCiphertext& st, const MessageCiphertext& ct);
std::pair<SignedCiphertext, MessageCiphertext> DecodePayload(ByteSpan bytes);

// Byte ranges of each component inside an encoded payload, for targeted
// mutation testing.
struct PayloadLayout {
  struct Range {
    std::string name;
    std::size_t offset;
    std::size_t length;
  };
  std::vector<Range> ranges;
};
PayloadLayout DescribePayload(const SignedCiphertext& st, const MessageCiphertext& ct);

}  // namespace signcast::absc
