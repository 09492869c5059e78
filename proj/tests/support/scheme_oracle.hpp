#pragma once

// Independent recomputation of the hash-derived scheme values with OpenSSL.

#include <openssl/evp.h>

#include "bn_oracle.hpp"
#include "signcast/absc/scheme.hpp"

namespace signcast::testing {

inline Bytes OracleSha256(std::initializer_list<ByteSpan> parts) {
  EVP_MD_CTX* c = EVP_MD_CTX_new();
  EVP_DigestInit_ex(c, EVP_sha256(), nullptr);
  for (ByteSpan p : parts) EVP_DigestUpdate(c, p.data(), p.size());
  Bytes out(32);
  unsigned int len = 0;
  EVP_DigestFinal_ex(c, out.data(), &len);
  EVP_MD_CTX_free(c);
  return out;
}

// int(SHA-256(data)) mod p.
inline Bn OracleH2(const BnMod& m, ByteSpan data) { return m.Reduce(Bn::FromBytes(OracleSha256({data}))); }

inline Bn OraclePi(const BnMod& m, ByteSpan msg, const crypto::GT& delta) {
  const Bytes d = delta.ToBytes();
  return m.Add(OracleH2(m, msg), OracleH2(m, d));
}

inline Bytes OracleMask(const crypto::GT& t_s, const Digest256& header) {
  const Bytes t = t_s.ToBytes();
  return OracleSha256({t, header.span()});
}

}  // namespace signcast::testing
