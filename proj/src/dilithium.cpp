// Copyright (c) 2026 The qtpm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qtpm/dilithium.hpp"

#include <cassert>
#include <cstring>

#include "qtpm/keccak.hpp"
#include "qtpm/ring.hpp"

namespace qtpm::dilithium {
namespace {

using ring::Params;
using ring::Poly;

constexpr std::int32_t kQ = 8380417;
constexpr int kK = 6;
constexpr int kL = 5;
constexpr std::int32_t kEta = 4;
constexpr std::int32_t kTau = 49;
constexpr std::int32_t kBeta = 196;  // tau * eta
constexpr std::int32_t kGamma1 = 1 << 19;
constexpr std::int32_t kGamma2 = (kQ - 1) / 32;
constexpr std::int32_t kD = 13;
constexpr std::size_t kOmega = 55;
constexpr int kMaxAttempts = 1000;

constexpr std::size_t kT1Bytes = 320;   // 10 bits/coeff
constexpr std::size_t kT0Bytes = 416;   // 13 bits/coeff
constexpr std::size_t kEtaBytes = 128;  // 4 bits/coeff
constexpr std::size_t kZBytes = 640;    // 20 bits/coeff
constexpr std::size_t kW1Bytes = 128;   // 4 bits/coeff
constexpr std::size_t kMuBytes = 64;

const Params& P() { return Params::dilithium(); }

std::int32_t centered(std::int32_t r) { return r > (kQ - 1) / 2 ? r - kQ : r; }
std::int32_t canonical(std::int32_t v) { return v < 0 ? v + kQ : v; }  // |v| < q

// LSB-first fixed-width bit packing shared by every encoding here.
void pack_bits(const std::uint32_t* vals, int width, std::uint8_t* out, std::size_t out_len) {
  std::memset(out, 0, out_len);
  std::size_t bit = 0;
  for (int i = 0; i < 256; i++) {
    for (int b = 0; b < width; b++, bit++)
      out[bit >> 3] |= static_cast<std::uint8_t>((vals[i] >> b & 1u) << (bit & 7));
  }
}

void unpack_bits(const std::uint8_t* in, int width, std::uint32_t* vals) {
  std::size_t bit = 0;
  for (int i = 0; i < 256; i++) {
    std::uint32_t v = 0;
    for (int b = 0; b < width; b++, bit++)
      v |= static_cast<std::uint32_t>(in[bit >> 3] >> (bit & 7) & 1u) << b;
    vals[i] = v;
  }
}

// --- expanders ---------------------------------------------------------------

Poly expand_a_entry(const std::uint8_t rho[32], int row, int col) {
  keccak::Sponge xof = keccak::make_shake128();
  xof.absorb({rho, 32});
  const std::uint16_t nonce = static_cast<std::uint16_t>((row << 8) + col);
  const std::uint8_t nb[2] = {static_cast<std::uint8_t>(nonce),
                              static_cast<std::uint8_t>(nonce >> 8)};
  xof.absorb(nb);
  return ring::sample_uniform(xof, P());  // 23-bit candidates, 24-bit stride
}

Poly expand_s_entry(const std::uint8_t rhoprime[64], std::uint16_t nonce) {
  keccak::Sponge xof = keccak::make_shake256();
  xof.absorb({rhoprime, 64});
  const std::uint8_t nb[2] = {static_cast<std::uint8_t>(nonce),
                              static_cast<std::uint8_t>(nonce >> 8)};
  xof.absorb(nb);
  Poly f = ring::zero(P());
  std::size_t filled = 0;
  while (filled < 256) {
    std::uint8_t byte;
    xof.squeeze({&byte, 1});
    for (const std::uint32_t t : {static_cast<std::uint32_t>(byte & 0x0f),
                                  static_cast<std::uint32_t>(byte >> 4)}) {
      if (t < 9 && filled < 256) f.c[filled++] = canonical(kEta - static_cast<std::int32_t>(t));
    }
  }
  return f;
}

Poly expand_mask_entry(const std::uint8_t rhoprime[64], std::uint16_t nonce) {
  keccak::Sponge xof = keccak::make_shake256();
  xof.absorb({rhoprime, 64});
  const std::uint8_t nb[2] = {static_cast<std::uint8_t>(nonce),
                              static_cast<std::uint8_t>(nonce >> 8)};
  xof.absorb(nb);
  std::uint8_t buf[kZBytes];
  xof.squeeze(buf);
  std::uint32_t vals[256];
  unpack_bits(buf, 20, vals);
  Poly f = ring::zero(P());
  for (int i = 0; i < 256; i++) f.c[i] = canonical(kGamma1 - static_cast<std::int32_t>(vals[i]));
  return f;
}

Poly sample_in_ball(const std::uint8_t seed[32]) {
  keccak::Sponge xof = keccak::make_shake256();
  xof.absorb({seed, 32});
  std::uint8_t sign_bytes[8];
  xof.squeeze(sign_bytes);
  std::uint64_t signs = 0;
  for (int i = 0; i < 8; i++) signs |= static_cast<std::uint64_t>(sign_bytes[i]) << (8 * i);

  Poly c = ring::zero(P());
  for (int i = 256 - kTau; i < 256; i++) {
    std::uint8_t j;
    do {
      xof.squeeze({&j, 1});
    } while (j > i);
    c.c[i] = c.c[j];
    c.c[j] = canonical(1 - 2 * static_cast<std::int32_t>(signs & 1));
    signs >>= 1;
  }
  return c;
}

// --- norms -------------------------------------------------------------------

bool norm_exceeds(const Poly& f, std::int32_t bound) {
  for (int i = 0; i < 256; i++) {
    const std::int32_t v = centered(f.c[i]);
    const std::int32_t a = v < 0 ? -v : v;
    if (a >= bound) return true;
  }
  return false;
}

// --- packing -----------------------------------------------------------------

void pack_t1(const Poly& f, std::uint8_t* out) {
  std::uint32_t vals[256];
  for (int i = 0; i < 256; i++) vals[i] = static_cast<std::uint32_t>(f.c[i]);
  pack_bits(vals, 10, out, kT1Bytes);
}

Poly unpack_t1(const std::uint8_t* in) {
  std::uint32_t vals[256];
  unpack_bits(in, 10, vals);
  Poly f = ring::zero(P());
  for (int i = 0; i < 256; i++) f.c[i] = static_cast<std::int32_t>(vals[i]);
  return f;
}

void pack_t0(const Poly& f, std::uint8_t* out) {
  // f holds canonical reps of t0 in (-2^12, 2^12]; store 2^12 - t0
  std::uint32_t vals[256];
  for (int i = 0; i < 256; i++)
    vals[i] = static_cast<std::uint32_t>((1 << (kD - 1)) - centered(f.c[i]));
  pack_bits(vals, 13, out, kT0Bytes);
}

Poly unpack_t0(const std::uint8_t* in) {
  std::uint32_t vals[256];
  unpack_bits(in, 13, vals);
  Poly f = ring::zero(P());
  for (int i = 0; i < 256; i++)
    f.c[i] = canonical((1 << (kD - 1)) - static_cast<std::int32_t>(vals[i]));
  return f;
}

void pack_eta(const Poly& f, std::uint8_t* out) {
  std::uint32_t vals[256];
  for (int i = 0; i < 256; i++) vals[i] = static_cast<std::uint32_t>(kEta - centered(f.c[i]));
  pack_bits(vals, 4, out, kEtaBytes);
}

Poly unpack_eta(const std::uint8_t* in) {
  std::uint32_t vals[256];
  unpack_bits(in, 4, vals);
  Poly f = ring::zero(P());
  for (int i = 0; i < 256; i++) f.c[i] = canonical(kEta - static_cast<std::int32_t>(vals[i]));
  return f;
}

void pack_z(const Poly& f, std::uint8_t* out) {
  std::uint32_t vals[256];
  for (int i = 0; i < 256; i++)
    vals[i] = static_cast<std::uint32_t>(kGamma1 - centered(f.c[i]));
  pack_bits(vals, 20, out, kZBytes);
}

Poly unpack_z(const std::uint8_t* in) {
  std::uint32_t vals[256];
  unpack_bits(in, 20, vals);
  Poly f = ring::zero(P());
  for (int i = 0; i < 256; i++) f.c[i] = canonical(kGamma1 - static_cast<std::int32_t>(vals[i]));
  return f;
}

void pack_w1(const Poly& f, std::uint8_t* out) {
  std::uint32_t vals[256];
  for (int i = 0; i < 256; i++) vals[i] = static_cast<std::uint32_t>(f.c[i]);
  pack_bits(vals, 4, out, kW1Bytes);
}

// --- hashing helpers -----------------------------------------------------------

void shake256_2(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                std::span<std::uint8_t> out) {
  keccak::Sponge s = keccak::make_shake256();
  s.absorb(a);
  s.absorb(b);
  s.squeeze(out);
}

struct SecretKeyView {
  const std::uint8_t* rho;
  const std::uint8_t* key;
  const std::uint8_t* tr;
  const std::uint8_t* s1;
  const std::uint8_t* s2;
  const std::uint8_t* t0;
};

SecretKeyView sk_view(const std::uint8_t* sk) {
  SecretKeyView v{};
  v.rho = sk;
  v.key = sk + 32;
  v.tr = sk + 64;
  v.s1 = sk + 96;
  v.s2 = v.s1 + kL * kEtaBytes;
  v.t0 = v.s2 + kK * kEtaBytes;
  return v;
}

}  // namespace

std::pair<std::int32_t, std::int32_t> power2round(std::int32_t r) {
  assert(r >= 0 && r < kQ);
  std::int32_t r0 = r & ((1 << kD) - 1);
  if (r0 > (1 << (kD - 1))) r0 -= 1 << kD;  // (-2^12, 2^12]
  return {(r - r0) >> kD, r0};
}

std::pair<std::int32_t, std::int32_t> decompose(std::int32_t r) {
  assert(r >= 0 && r < kQ);
  constexpr std::int32_t alpha = 2 * kGamma2;
  std::int32_t r0 = r % alpha;
  if (r0 > alpha / 2) r0 -= alpha;  // (-gamma2, gamma2]
  std::int32_t r1;
  if (r - r0 == kQ - 1) {
    r1 = 0;
    r0 -= 1;
  } else {
    r1 = (r - r0) / alpha;
  }
  return {r1, r0};
}

std::int32_t highbits(std::int32_t r) { return decompose(r).first; }

bool make_hint(std::int32_t z_centered, std::int32_t r) {
  const std::int32_t shifted =
      static_cast<std::int32_t>(((static_cast<std::int64_t>(r) + z_centered) % kQ + kQ) % kQ);
  return highbits(r) != highbits(shifted);
}

std::int32_t use_hint(bool hint, std::int32_t r) {
  const auto [r1, r0] = decompose(r);
  if (!hint) return r1;
  return r0 > 0 ? (r1 + 1) & 15 : (r1 - 1) & 15;
}

void keygen(std::span<const std::uint8_t> seed, std::span<std::uint8_t> pk_out,
            std::span<std::uint8_t> sk_out) {
  assert(seed.size() == kSeedBytes);
  assert(pk_out.size() == kPublicKeyBytes && sk_out.size() == kSecretKeyBytes);

  std::uint8_t seedbuf[128];
  keccak::shake256(seed, seedbuf);
  const std::uint8_t* rho = seedbuf;
  const std::uint8_t* rhoprime = seedbuf + 32;
  const std::uint8_t* key = seedbuf + 96;

  Poly s1[kL], s1_hat[kL], s2[kK];
  for (int i = 0; i < kL; i++) {
    s1[i] = expand_s_entry(rhoprime, static_cast<std::uint16_t>(i));
    s1_hat[i] = s1[i];
    ring::ntt_forward(s1_hat[i], P());
  }
  for (int i = 0; i < kK; i++)
    s2[i] = expand_s_entry(rhoprime, static_cast<std::uint16_t>(kL + i));

  std::memcpy(pk_out.data(), rho, 32);
  std::uint8_t* sk = sk_out.data();
  std::memcpy(sk, rho, 32);
  std::memcpy(sk + 32, key, 32);
  auto skv = sk_view(sk);
  for (int i = 0; i < kL; i++) pack_eta(s1[i], sk_out.data() + (skv.s1 - sk) + i * kEtaBytes);

  for (int i = 0; i < kK; i++) {
    Poly t = ring::zero(P());
    for (int j = 0; j < kL; j++) {
      const Poly a = expand_a_entry(rho, i, j);
      t = ring::poly_add(t, ring::pointwise(a, s1_hat[j], P()), P());
    }
    ring::ntt_inverse(t, P());
    t = ring::poly_add(t, s2[i], P());

    Poly t1 = ring::zero(P()), t0 = ring::zero(P());
    for (int k = 0; k < 256; k++) {
      const auto [hi, lo] = power2round(t.c[k]);
      t1.c[k] = hi;
      t0.c[k] = canonical(lo);
    }
    pack_t1(t1, pk_out.data() + 32 + i * kT1Bytes);
    pack_eta(s2[i], sk_out.data() + (skv.s2 - sk) + i * kEtaBytes);
    pack_t0(t0, sk_out.data() + (skv.t0 - sk) + i * kT0Bytes);
  }

  // tr = H(pk), stored for signing
  keccak::shake256(pk_out, {sk_out.data() + 64, 32});
}

bool sign(std::span<const std::uint8_t> sk, std::span<const std::uint8_t> msg,
          std::span<std::uint8_t> sig_out) {
  assert(sk.size() == kSecretKeyBytes && sig_out.size() == kSignatureBytes);
  const auto skv = sk_view(sk.data());

  std::uint8_t mu[kMuBytes];
  shake256_2({skv.tr, 32}, msg, mu);
  std::uint8_t rhoprime[64];
  shake256_2({skv.key, 32}, mu, rhoprime);

  Poly mat[kK][kL];
  for (int i = 0; i < kK; i++)
    for (int j = 0; j < kL; j++) mat[i][j] = expand_a_entry(skv.rho, i, j);

  Poly s1_hat[kL], s2_hat[kK], t0_hat[kK];
  for (int i = 0; i < kL; i++) {
    s1_hat[i] = unpack_eta(skv.s1 + i * kEtaBytes);
    ring::ntt_forward(s1_hat[i], P());
  }
  for (int i = 0; i < kK; i++) {
    s2_hat[i] = unpack_eta(skv.s2 + i * kEtaBytes);
    ring::ntt_forward(s2_hat[i], P());
    t0_hat[i] = unpack_t0(skv.t0 + i * kT0Bytes);
    ring::ntt_forward(t0_hat[i], P());
  }

  for (std::uint16_t kappa = 0; kappa < kMaxAttempts; kappa++) {
    Poly y[kL], y_hat[kL];
    for (int i = 0; i < kL; i++) {
      y[i] = expand_mask_entry(rhoprime, static_cast<std::uint16_t>(kL * kappa + i));
      y_hat[i] = y[i];
      ring::ntt_forward(y_hat[i], P());
    }

    Poly w1[kK], w0[kK];
    for (int i = 0; i < kK; i++) {
      Poly acc = ring::zero(P());
      for (int j = 0; j < kL; j++)
        acc = ring::poly_add(acc, ring::pointwise(mat[i][j], y_hat[j], P()), P());
      ring::ntt_inverse(acc, P());
      w1[i] = ring::zero(P());
      w0[i] = ring::zero(P());
      for (int k = 0; k < 256; k++) {
        const auto [hi, lo] = decompose(acc.c[k]);
        w1[i].c[k] = hi;
        w0[i].c[k] = canonical(lo);
      }
    }

    std::uint8_t w1_packed[kK * kW1Bytes];
    for (int i = 0; i < kK; i++) pack_w1(w1[i], w1_packed + i * kW1Bytes);
    std::uint8_t c_tilde[32];
    shake256_2(mu, w1_packed, c_tilde);

    Poly c = sample_in_ball(c_tilde);
    Poly c_hat = c;
    ring::ntt_forward(c_hat, P());

    Poly z[kL];
    bool reject = false;
    for (int i = 0; i < kL && !reject; i++) {
      Poly cs1 = ring::pointwise(c_hat, s1_hat[i], P());
      ring::ntt_inverse(cs1, P());
      z[i] = ring::poly_add(y[i], cs1, P());
      reject = norm_exceeds(z[i], kGamma1 - kBeta);
    }
    if (reject) continue;

    Poly low[kK];  // w0 - cs2, then + ct0 for the hint
    for (int i = 0; i < kK && !reject; i++) {
      Poly cs2 = ring::pointwise(c_hat, s2_hat[i], P());
      ring::ntt_inverse(cs2, P());
      low[i] = ring::poly_sub(w0[i], cs2, P());
      reject = norm_exceeds(low[i], kGamma2 - kBeta);
    }
    if (reject) continue;

    Poly ct0[kK];
    for (int i = 0; i < kK && !reject; i++) {
      ct0[i] = ring::pointwise(c_hat, t0_hat[i], P());
      ring::ntt_inverse(ct0[i], P());
      reject = norm_exceeds(ct0[i], kGamma2);
    }
    if (reject) continue;

    // hint marks coefficients where the carry w0 - cs2 + ct0 spills into
    // the high bits relative to w1
    std::uint8_t hint[kK][256];
    std::size_t hint_count = 0;
    for (int i = 0; i < kK && !reject; i++) {
      low[i] = ring::poly_add(low[i], ct0[i], P());
      for (int k = 0; k < 256; k++) {
        const std::int32_t a0 = centered(low[i].c[k]);
        const std::int32_t a1 = w1[i].c[k];
        const bool h = a0 > kGamma2 || a0 < -kGamma2 || (a0 == -kGamma2 && a1 != 0);
        hint[i][k] = h ? 1 : 0;
        hint_count += h;
      }
      reject = hint_count > kOmega;
    }
    if (reject) continue;

    // encode (c_tilde, z, h)
    std::uint8_t* sig = sig_out.data();
    std::memcpy(sig, c_tilde, 32);
    for (int i = 0; i < kL; i++) pack_z(z[i], sig + 32 + i * kZBytes);
    std::uint8_t* h_enc = sig + 32 + kL * kZBytes;
    std::memset(h_enc, 0, kOmega + kK);
    std::size_t pos = 0;
    for (int i = 0; i < kK; i++) {
      for (int k = 0; k < 256; k++)
        if (hint[i][k]) h_enc[pos++] = static_cast<std::uint8_t>(k);
      h_enc[kOmega + i] = static_cast<std::uint8_t>(pos);
    }
    return true;
  }
  return false;
}

bool verify(std::span<const std::uint8_t> pk, std::span<const std::uint8_t> msg,
            std::span<const std::uint8_t> sig) {
  if (pk.size() != kPublicKeyBytes || sig.size() != kSignatureBytes) return false;
  const std::uint8_t* rho = pk.data();
  const std::uint8_t* c_tilde = sig.data();

  Poly z[kL];
  for (int i = 0; i < kL; i++) {
    z[i] = unpack_z(sig.data() + 32 + i * kZBytes);
    if (norm_exceeds(z[i], kGamma1 - kBeta)) return false;
  }

  // hint decoding with strict canonicity
  const std::uint8_t* h_enc = sig.data() + 32 + kL * kZBytes;
  std::uint8_t hint[kK][256] = {};
  std::size_t pos = 0;
  for (int i = 0; i < kK; i++) {
    const std::uint8_t count = h_enc[kOmega + i];
    if (count < pos || count > kOmega) return false;
    for (std::size_t j = pos; j < count; j++) {
      if (j > pos && h_enc[j] <= h_enc[j - 1]) return false;  // strictly increasing
      hint[i][h_enc[j]] = 1;
    }
    pos = count;
  }
  for (std::size_t j = pos; j < kOmega; j++)
    if (h_enc[j] != 0) return false;  // zero padding

  std::uint8_t tr[32], mu[kMuBytes];
  keccak::shake256(pk, tr);
  shake256_2(tr, msg, mu);

  Poly c = sample_in_ball(c_tilde);
  Poly c_hat = c;
  ring::ntt_forward(c_hat, P());

  Poly z_hat[kL];
  for (int i = 0; i < kL; i++) {
    z_hat[i] = z[i];
    ring::ntt_forward(z_hat[i], P());
  }

  std::uint8_t w1_packed[kK * kW1Bytes];
  for (int i = 0; i < kK; i++) {
    Poly acc = ring::zero(P());
    for (int j = 0; j < kL; j++) {
      const Poly a = expand_a_entry(rho, i, j);
      acc = ring::poly_add(acc, ring::pointwise(a, z_hat[j], P()), P());
    }
    // subtract c * t1 * 2^d
    Poly t1 = unpack_t1(pk.data() + 32 + i * kT1Bytes);
    for (int k = 0; k < 256; k++)
      t1.c[k] = static_cast<std::int32_t>((static_cast<std::int64_t>(t1.c[k]) << kD) % kQ);
    ring::ntt_forward(t1, P());
    acc = ring::poly_sub(acc, ring::pointwise(c_hat, t1, P()), P());
    ring::ntt_inverse(acc, P());

    Poly w1 = ring::zero(P());
    for (int k = 0; k < 256; k++) w1.c[k] = use_hint(hint[i][k] != 0, acc.c[k]);
    pack_w1(w1, w1_packed + i * kW1Bytes);
  }

  std::uint8_t expect[32];
  shake256_2(mu, w1_packed, expect);
  return std::memcmp(expect, c_tilde, 32) == 0;
}

}  // namespace qtpm::dilithium
