// Copyright (c) 2026 The qtpm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qtpm/ring.hpp"

#include <cassert>

namespace qtpm::ring {
namespace {

std::uint32_t bit_reverse(std::uint32_t v, unsigned bits) {
  std::uint32_t r = 0;
  for (unsigned i = 0; i < bits; i++) r |= ((v >> i) & 1u) << (bits - 1 - i);
  return r;
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t q) {
  std::int64_t acc = 1;
  base %= q;
  while (exp > 0) {
    if (exp & 1) acc = acc * base % q;
    base = base * base % q;
    exp >>= 1;
  }
  return acc;
}

Params build(std::uint16_t n, std::int32_t q, std::int32_t root, std::uint8_t layers,
             bool complete, std::uint8_t sample_bits, std::uint8_t sample_stride) {
  Params p{};
  p.n = n;
  p.q = q;
  p.root = root;
  p.layers = layers;
  p.complete = complete;
  p.sample_bits = sample_bits;
  p.sample_stride = sample_stride;
  p.inv_scale = static_cast<std::int32_t>(
      pow_mod(pow_mod(2, q - 2, q), layers, q));  // (2^layers)^-1, q prime
  p.barrett_mu = static_cast<std::uint64_t>(~0ULL) / static_cast<std::uint64_t>(q);
  const std::uint32_t half = 1u << layers;  // number of butterfly twiddles
  const unsigned rev_bits = layers;
  for (std::uint32_t i = 0; i < half; i++)
    p.zeta[i] = static_cast<std::int32_t>(pow_mod(root, bit_reverse(i, rev_bits), q));
  if (!complete) {
    // pair i reduces modulo x^2 - root^(2 br(i) + 1)
    for (std::uint32_t i = 0; i < n / 2u; i++)
      p.basecase_gamma[i] =
          static_cast<std::int32_t>(pow_mod(root, 2 * bit_reverse(i, rev_bits) + 1, q));
  }
  return p;
}

}  // namespace

const Params& Params::kyber() {
  static const Params p = build(256, 3329, 17, 7, false, 12, 12);
  return p;
}

const Params& Params::dilithium() {
  static const Params p = build(256, 8380417, 1753, 8, true, 23, 24);
  return p;
}

const Params& Params::rot() {
  static const Params p = build(512, 13313, 7, 9, true, 14, 16);
  return p;
}

Poly zero(const Params& p) {
  Poly f;
  f.n = p.n;
  f.q = p.q;
  return f;
}

std::int32_t addmod(std::int32_t a, std::int32_t b, const Params& p) {
  std::int32_t r = a + b - p.q;
  r += (r >> 31) & p.q;
  return r;
}

std::int32_t submod(std::int32_t a, std::int32_t b, const Params& p) {
  std::int32_t r = a - b;
  r += (r >> 31) & p.q;
  return r;
}

std::int32_t reduce64(std::uint64_t x, const Params& p) {
  // floor(x * mu / 2^64) is off from floor(x / q) by at most one
  std::uint64_t quot =
      static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * p.barrett_mu) >> 64);
  std::int64_t r = static_cast<std::int64_t>(x - quot * static_cast<std::uint64_t>(p.q));
  r -= p.q;
  r += (r >> 63) & p.q;
  return static_cast<std::int32_t>(r);
}

std::int32_t mulmod(std::int32_t a, std::int32_t b, const Params& p) {
  return reduce64(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b), p);
}

void ntt_forward(Poly& f, const Params& p) {
  assert(p.matches(f.n, f.q));
  std::size_t k = 1;
  for (std::size_t len = p.n >> 1; len >= (p.complete ? 1u : 2u); len >>= 1) {
    for (std::size_t start = 0; start < p.n; start += 2 * len) {
      const std::int32_t zeta = p.zeta[k++];
      for (std::size_t j = start; j < start + len; j++) {
        const std::int32_t t = mulmod(zeta, f.c[j + len], p);
        f.c[j + len] = submod(f.c[j], t, p);
        f.c[j] = addmod(f.c[j], t, p);
      }
    }
  }
}

void ntt_inverse(Poly& f, const Params& p) {
  assert(p.matches(f.n, f.q));
  std::size_t k = (1u << p.layers) - 1;
  for (std::size_t len = (p.complete ? 1u : 2u); len <= p.n >> 1; len <<= 1) {
    for (std::size_t start = 0; start < p.n; start += 2 * len) {
      // Gentleman-Sande butterfly; -zeta^-1 equals the forward twiddle
      // walked backwards, with the sign folded into (b - a).
      const std::int32_t zeta = p.zeta[k--];
      for (std::size_t j = start; j < start + len; j++) {
        const std::int32_t t = f.c[j];
        f.c[j] = addmod(t, f.c[j + len], p);
        f.c[j + len] = mulmod(zeta, submod(f.c[j + len], t, p), p);
      }
    }
  }
  for (std::size_t i = 0; i < p.n; i++) f.c[i] = mulmod(f.c[i], p.inv_scale, p);
}

Poly pointwise(const Poly& a, const Poly& b, const Params& p) {
  assert(p.matches(a.n, a.q) && p.matches(b.n, b.q));
  Poly r = zero(p);
  if (p.complete) {
    for (std::size_t i = 0; i < p.n; i++) r.c[i] = mulmod(a.c[i], b.c[i], p);
    return r;
  }
  // degree-1 products modulo x^2 - gamma_i
  for (std::size_t i = 0; i < p.n / 2u; i++) {
    const std::int32_t a0 = a.c[2 * i], a1 = a.c[2 * i + 1];
    const std::int32_t b0 = b.c[2 * i], b1 = b.c[2 * i + 1];
    const std::int32_t g = p.basecase_gamma[i];
    r.c[2 * i] = addmod(mulmod(a0, b0, p), mulmod(mulmod(a1, b1, p), g, p), p);
    r.c[2 * i + 1] = addmod(mulmod(a0, b1, p), mulmod(a1, b0, p), p);
  }
  return r;
}

Poly poly_mul(const Poly& a, const Poly& b, const Params& p) {
  Poly fa = a, fb = b;
  ntt_forward(fa, p);
  ntt_forward(fb, p);
  Poly r = pointwise(fa, fb, p);
  ntt_inverse(r, p);
  return r;
}

Poly poly_add(const Poly& a, const Poly& b, const Params& p) {
  assert(p.matches(a.n, a.q) && p.matches(b.n, b.q));
  Poly r = zero(p);
  for (std::size_t i = 0; i < p.n; i++) r.c[i] = addmod(a.c[i], b.c[i], p);
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b, const Params& p) {
  assert(p.matches(a.n, a.q) && p.matches(b.n, b.q));
  Poly r = zero(p);
  for (std::size_t i = 0; i < p.n; i++) r.c[i] = submod(a.c[i], b.c[i], p);
  return r;
}

Poly sample_uniform(keccak::Sponge& xof, const Params& p) {
  Poly r = zero(p);
  const std::uint32_t mask = (1u << p.sample_bits) - 1;
  std::uint64_t window = 0;
  unsigned window_bits = 0;
  std::size_t filled = 0;
  while (filled < p.n) {
    while (window_bits < p.sample_stride) {
      std::uint8_t byte;
      xof.squeeze({&byte, 1});
      window |= static_cast<std::uint64_t>(byte) << window_bits;
      window_bits += 8;
    }
    const std::uint32_t cand = static_cast<std::uint32_t>(window) & mask;
    window >>= p.sample_stride;
    window_bits -= p.sample_stride;
    if (cand < static_cast<std::uint32_t>(p.q)) r.c[filled++] = static_cast<std::int32_t>(cand);
  }
  return r;
}

Poly sample_cbd(std::span<const std::uint8_t> bytes, int eta, const Params& p) {
  assert(eta == 2 || eta == 3);
  assert(bytes.size() == static_cast<std::size_t>(p.n) * eta / 4);
  Poly r = zero(p);
  std::uint64_t window = 0;
  unsigned window_bits = 0;
  std::size_t consumed = 0;
  for (std::size_t i = 0; i < p.n; i++) {
    while (window_bits < static_cast<unsigned>(2 * eta)) {
      window |= static_cast<std::uint64_t>(bytes[consumed++]) << window_bits;
      window_bits += 8;
    }
    std::int32_t a = 0, b = 0;
    for (int j = 0; j < eta; j++) a += (window >> j) & 1;
    for (int j = 0; j < eta; j++) b += (window >> (eta + j)) & 1;
    window >>= 2 * eta;
    window_bits -= 2 * eta;
    r.c[i] = submod(a, b, p);  // canonical representative of a - b
  }
  return r;
}

}  // namespace qtpm::ring
