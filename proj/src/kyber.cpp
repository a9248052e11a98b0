// Copyright (c) 2026 The qtpm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qtpm/kyber.hpp"

#include <cassert>
#include <cstring>

#include "qtpm/keccak.hpp"
#include "qtpm/ring.hpp"

namespace qtpm::kyber {
namespace {

using ring::Params;
using ring::Poly;
using ring::PolyVec;

constexpr int kRank = 3;  // module rank k for the 768 parameter set
constexpr int kEta1 = 2;
constexpr int kEta2 = 2;
constexpr int kDu = 10;
constexpr int kDv = 4;
constexpr std::size_t kPolyBytes = 384;
constexpr std::size_t kPrfBytes = 128;  // 64 * eta

const Params& P() { return Params::kyber(); }

// --- bit packing -----------------------------------------------------------

void pack12(const Poly& f, std::uint8_t* out) {
  for (int i = 0; i < 128; i++) {
    const std::uint16_t c0 = static_cast<std::uint16_t>(f.c[2 * i]);
    const std::uint16_t c1 = static_cast<std::uint16_t>(f.c[2 * i + 1]);
    out[3 * i] = static_cast<std::uint8_t>(c0);
    out[3 * i + 1] = static_cast<std::uint8_t>((c0 >> 8) | (c1 << 4));
    out[3 * i + 2] = static_cast<std::uint8_t>(c1 >> 4);
  }
}

Poly unpack12(const std::uint8_t* in) {
  Poly f = ring::zero(P());
  for (int i = 0; i < 128; i++) {
    std::int32_t c0 = in[3 * i] | ((in[3 * i + 1] & 0x0f) << 8);
    std::int32_t c1 = (in[3 * i + 1] >> 4) | (in[3 * i + 2] << 4);
    // canonicalize; honest encodings are already below q
    f.c[2 * i] = c0 % P().q;
    f.c[2 * i + 1] = c1 % P().q;
  }
  return f;
}

std::uint32_t compress(std::int32_t x, int d) {
  return ((static_cast<std::uint32_t>(x) << d) + 1664u) / 3329u & ((1u << d) - 1);
}

std::int32_t decompress(std::uint32_t y, int d) {
  return static_cast<std::int32_t>((y * 3329u + (1u << (d - 1))) >> d);
}

void pack_u(const PolyVec& u, std::uint8_t* out) {
  // 10-bit LSB-first packing of compressed coefficients
  std::size_t bitpos = 0;
  for (int v = 0; v < kRank; v++) {
    for (int i = 0; i < 256; i++) {
      const std::uint32_t t = compress(u.at[v].c[i], kDu);
      for (int b = 0; b < kDu; b++, bitpos++) {
        if (t >> b & 1) out[bitpos >> 3] |= static_cast<std::uint8_t>(1u << (bitpos & 7));
      }
    }
  }
}

PolyVec unpack_u(const std::uint8_t* in) {
  PolyVec u;
  u.len = kRank;
  std::size_t bitpos = 0;
  for (int v = 0; v < kRank; v++) {
    u.at[v] = ring::zero(P());
    for (int i = 0; i < 256; i++) {
      std::uint32_t t = 0;
      for (int b = 0; b < kDu; b++, bitpos++)
        t |= static_cast<std::uint32_t>(in[bitpos >> 3] >> (bitpos & 7) & 1) << b;
      u.at[v].c[i] = decompress(t, kDu);
    }
  }
  return u;
}

void pack_v(const Poly& f, std::uint8_t* out) {
  for (int i = 0; i < 128; i++) {
    const std::uint32_t lo = compress(f.c[2 * i], kDv);
    const std::uint32_t hi = compress(f.c[2 * i + 1], kDv);
    out[i] = static_cast<std::uint8_t>(lo | (hi << 4));
  }
}

Poly unpack_v(const std::uint8_t* in) {
  Poly f = ring::zero(P());
  for (int i = 0; i < 128; i++) {
    f.c[2 * i] = decompress(in[i] & 0x0f, kDv);
    f.c[2 * i + 1] = decompress(in[i] >> 4, kDv);
  }
  return f;
}

// --- samplers --------------------------------------------------------------

Poly matrix_entry(const std::uint8_t rho[32], std::uint8_t x, std::uint8_t y) {
  keccak::Sponge xof = keccak::make_shake128();
  xof.absorb({rho, 32});
  const std::uint8_t idx[2] = {x, y};
  xof.absorb(idx);
  return ring::sample_uniform(xof, P());
}

Poly noise_poly(const std::uint8_t seed[32], std::uint8_t nonce, int eta) {
  std::uint8_t buf[kPrfBytes];
  const std::size_t len = static_cast<std::size_t>(64 * eta);
  keccak::Sponge prf = keccak::make_shake256();
  prf.absorb({seed, 32});
  prf.absorb({&nonce, 1});
  prf.squeeze({buf, len});
  return ring::sample_cbd({buf, len}, eta, P());
}

// --- CPA core ---------------------------------------------------------------

void cpa_keygen(const std::uint8_t d[32], std::uint8_t* pk, std::uint8_t* sk_cpa) {
  std::uint8_t buf[64];
  keccak::sha3_512({d, 32}, buf);
  const std::uint8_t* rho = buf;
  const std::uint8_t* sigma = buf + 32;

  PolyVec s_hat, e_hat;
  s_hat.len = e_hat.len = kRank;
  for (int i = 0; i < kRank; i++) {
    s_hat.at[i] = noise_poly(sigma, static_cast<std::uint8_t>(i), kEta1);
    e_hat.at[i] = noise_poly(sigma, static_cast<std::uint8_t>(kRank + i), kEta1);
    ring::ntt_forward(s_hat.at[i], P());
    ring::ntt_forward(e_hat.at[i], P());
  }
  for (int i = 0; i < kRank; i++) {
    Poly t = e_hat.at[i];
    for (int j = 0; j < kRank; j++) {
      const Poly a = matrix_entry(rho, static_cast<std::uint8_t>(j), static_cast<std::uint8_t>(i));
      t = ring::poly_add(t, ring::pointwise(a, s_hat.at[j], P()), P());
    }
    pack12(t, pk + kPolyBytes * i);
  }
  std::memcpy(pk + kRank * kPolyBytes, rho, 32);
  for (int i = 0; i < kRank; i++) pack12(s_hat.at[i], sk_cpa + kPolyBytes * i);
}

void cpa_encrypt(const std::uint8_t* pk, const std::uint8_t m[32], const std::uint8_t coins[32],
                 std::uint8_t* ct) {
  const std::uint8_t* rho = pk + kRank * kPolyBytes;

  PolyVec r_hat;
  r_hat.len = kRank;
  for (int i = 0; i < kRank; i++) {
    r_hat.at[i] = noise_poly(coins, static_cast<std::uint8_t>(i), kEta1);
    ring::ntt_forward(r_hat.at[i], P());
  }

  PolyVec u;
  u.len = kRank;
  for (int i = 0; i < kRank; i++) {
    Poly acc = ring::zero(P());
    for (int j = 0; j < kRank; j++) {
      // A^T entry (i, j) streams from XOF(rho, i, j)
      const Poly a = matrix_entry(rho, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j));
      acc = ring::poly_add(acc, ring::pointwise(a, r_hat.at[j], P()), P());
    }
    ring::ntt_inverse(acc, P());
    u.at[i] = ring::poly_add(acc, noise_poly(coins, static_cast<std::uint8_t>(kRank + i), kEta2), P());
  }

  Poly v = ring::zero(P());
  for (int j = 0; j < kRank; j++) {
    const Poly t = unpack12(pk + kPolyBytes * j);
    v = ring::poly_add(v, ring::pointwise(t, r_hat.at[j], P()), P());
  }
  ring::ntt_inverse(v, P());
  v = ring::poly_add(v, noise_poly(coins, 2 * kRank, kEta2), P());
  Poly msg_poly = ring::zero(P());
  for (int i = 0; i < 256; i++)
    msg_poly.c[i] = (m[i >> 3] >> (i & 7) & 1) ? (P().q + 1) / 2 : 0;
  v = ring::poly_add(v, msg_poly, P());

  std::memset(ct, 0, kCiphertextBytes);
  pack_u(u, ct);
  pack_v(v, ct + kRank * 320);
}

void cpa_decrypt(const std::uint8_t* sk_cpa, const std::uint8_t* ct, std::uint8_t m[32]) {
  PolyVec u = unpack_u(ct);
  const Poly v = unpack_v(ct + kRank * 320);

  Poly acc = ring::zero(P());
  for (int j = 0; j < kRank; j++) {
    ring::ntt_forward(u.at[j], P());
    const Poly s = unpack12(sk_cpa + kPolyBytes * j);
    acc = ring::poly_add(acc, ring::pointwise(s, u.at[j], P()), P());
  }
  ring::ntt_inverse(acc, P());
  const Poly diff = ring::poly_sub(v, acc, P());

  std::memset(m, 0, 32);
  for (int i = 0; i < 256; i++)
    m[i >> 3] |= static_cast<std::uint8_t>(compress(diff.c[i], 1) << (i & 7));
}

void kdf_shared(const std::uint8_t kbar[32], const std::uint8_t* ct, std::uint8_t ss[32]) {
  std::uint8_t ct_hash[32];
  keccak::sha3_256({ct, kCiphertextBytes}, ct_hash);
  keccak::Sponge kdf = keccak::make_shake256();
  kdf.absorb({kbar, 32});
  kdf.absorb(ct_hash);
  kdf.squeeze({ss, 32});
}

}  // namespace

void keygen(std::span<const std::uint8_t> seed_d, std::span<const std::uint8_t> seed_z,
            std::span<std::uint8_t> pk_out, std::span<std::uint8_t> sk_out) {
  assert(seed_d.size() == kSeedBytes && seed_z.size() == kSeedBytes);
  assert(pk_out.size() == kPublicKeyBytes && sk_out.size() == kSecretKeyBytes);
  cpa_keygen(seed_d.data(), pk_out.data(), sk_out.data());
  std::memcpy(sk_out.data() + kRank * kPolyBytes, pk_out.data(), kPublicKeyBytes);
  keccak::sha3_256(pk_out, {sk_out.data() + kRank * kPolyBytes + kPublicKeyBytes, 32});
  std::memcpy(sk_out.data() + kSecretKeyBytes - 32, seed_z.data(), 32);
}

bool encapsulate(std::span<const std::uint8_t> pk, std::span<const std::uint8_t> seed_m,
                 std::span<std::uint8_t> ct_out, std::span<std::uint8_t> ss_out) {
  if (pk.size() != kPublicKeyBytes) return false;
  assert(seed_m.size() == kSeedBytes);
  assert(ct_out.size() == kCiphertextBytes && ss_out.size() == kSharedSecretBytes);

  std::uint8_t m[32];
  keccak::sha3_256(seed_m, m);

  std::uint8_t pk_hash[32];
  keccak::sha3_256(pk, pk_hash);

  std::uint8_t g_in[64], g_out[64];
  std::memcpy(g_in, m, 32);
  std::memcpy(g_in + 32, pk_hash, 32);
  keccak::sha3_512(g_in, g_out);  // (Kbar, r)

  cpa_encrypt(pk.data(), m, g_out + 32, ct_out.data());
  kdf_shared(g_out, ct_out.data(), ss_out.data());
  return true;
}

bool decapsulate(std::span<const std::uint8_t> sk, std::span<const std::uint8_t> ct,
                 std::span<std::uint8_t> ss_out) {
  if (sk.size() != kSecretKeyBytes || ct.size() != kCiphertextBytes) return false;
  assert(ss_out.size() == kSharedSecretBytes);

  const std::uint8_t* pk = sk.data() + kRank * kPolyBytes;
  const std::uint8_t* pk_hash = pk + kPublicKeyBytes;
  const std::uint8_t* z = sk.data() + kSecretKeyBytes - 32;

  std::uint8_t m[32];
  cpa_decrypt(sk.data(), ct.data(), m);

  std::uint8_t g_in[64], g_out[64];
  std::memcpy(g_in, m, 32);
  std::memcpy(g_in + 32, pk_hash, 32);
  keccak::sha3_512(g_in, g_out);

  std::uint8_t ct_cmp[kCiphertextBytes];
  cpa_encrypt(pk, m, g_out + 32, ct_cmp);

  // constant-time compare and select: on mismatch the KDF input is z
  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < kCiphertextBytes; i++) diff |= ct[i] ^ ct_cmp[i];
  const std::uint8_t mask = static_cast<std::uint8_t>(-static_cast<std::int8_t>(diff != 0));
  std::uint8_t kbar[32];
  for (int i = 0; i < 32; i++)
    kbar[i] = static_cast<std::uint8_t>((g_out[i] & ~mask) | (z[i] & mask));

  kdf_shared(kbar, ct.data(), ss_out.data());
  return true;
}

DataStatus data_encrypt(std::span<const std::uint8_t> pk, std::span<const std::uint8_t> plaintext,
                        Rng& rng, std::span<std::uint8_t> out, std::size_t& out_len) {
  if (plaintext.size() > kMaxDataBytes || pk.size() != kPublicKeyBytes) return DataStatus::kBadLength;
  assert(out.size() >= sealed_bytes(plaintext.size()));

  std::uint8_t seed_m[kSeedBytes];
  rng.fill(seed_m);
  std::uint8_t ss[kSharedSecretBytes];
  if (!encapsulate(pk, seed_m, out.first(kCiphertextBytes), ss)) return DataStatus::kBadLength;

  std::uint8_t* nonce = out.data() + kCiphertextBytes;
  rng.fill({nonce, kNonceBytes});

  std::uint8_t* payload = nonce + kNonceBytes;
  keccak::Sponge pad = keccak::make_shake256();
  pad.absorb(ss);
  pad.absorb({nonce, kNonceBytes});
  pad.squeeze({payload, plaintext.size()});
  for (std::size_t i = 0; i < plaintext.size(); i++) payload[i] ^= plaintext[i];

  keccak::Sponge tag = keccak::make_sha3_256();
  tag.absorb(ss);
  tag.absorb(plaintext);
  tag.squeeze({payload + plaintext.size(), kTagBytes});

  out_len = sealed_bytes(plaintext.size());
  return DataStatus::kOk;
}

DataStatus data_decrypt(std::span<const std::uint8_t> sk, std::span<const std::uint8_t> sealed,
                        std::span<std::uint8_t> out, std::size_t& out_len) {
  if (sealed.size() < sealed_bytes(0) || sealed.size() > sealed_bytes(kMaxDataBytes))
    return DataStatus::kBadLength;
  const std::size_t pt_len = sealed.size() - sealed_bytes(0);
  assert(out.size() >= pt_len);

  std::uint8_t ss[kSharedSecretBytes];
  if (!decapsulate(sk, sealed.first(kCiphertextBytes), ss)) return DataStatus::kBadLength;

  const std::uint8_t* nonce = sealed.data() + kCiphertextBytes;
  const std::uint8_t* payload = nonce + kNonceBytes;

  keccak::Sponge pad = keccak::make_shake256();
  pad.absorb(ss);
  pad.absorb({nonce, kNonceBytes});
  std::uint8_t stream[kMaxDataBytes];
  pad.squeeze({stream, pt_len});
  for (std::size_t i = 0; i < pt_len; i++) out[i] = payload[i] ^ stream[i];

  std::uint8_t expect[kTagBytes];
  keccak::Sponge tag = keccak::make_sha3_256();
  tag.absorb(ss);
  tag.absorb(out.first(pt_len));
  tag.squeeze(expect);

  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < kTagBytes; i++) diff |= expect[i] ^ payload[pt_len + i];
  if (diff != 0) return DataStatus::kIntegrityFail;

  out_len = pt_len;
  return DataStatus::kOk;
}

}  // namespace qtpm::kyber
