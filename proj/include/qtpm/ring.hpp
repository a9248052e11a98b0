// Copyright (c) 2026 The qtpm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QTPM_RING_HPP
#define QTPM_RING_HPP

#include <array>
#include <cstdint>
#include <span>

#include "qtpm/keccak.hpp"

namespace qtpm::ring {

inline constexpr std::size_t kMaxN = 512;

/// Parameters for Z_q[x]/(x^n + 1), with twiddle factors precomputed at
/// construction in bit-reversed order.
///
/// When q = 1 (mod 2n) the negacyclic NTT is complete (log2(n) layers,
/// pointwise products on single coefficients). Kyber's q = 3329 satisfies
/// only q = 1 (mod n), so its transform stops after 7 layers and pointwise
/// products act on degree-1 pairs modulo (x^2 - gamma_i).
struct Params {
  std::uint16_t n;
  std::int32_t q;
  std::uint8_t layers;
  bool complete;
  std::int32_t root;       // smallest element of order 2n (complete) or n
  std::int32_t inv_scale;  // 2^-layers mod q
  std::uint8_t sample_bits;    // uniform rejection: payload bits per candidate
  std::uint8_t sample_stride;  // uniform rejection: stream bits consumed per candidate
  std::uint64_t barrett_mu;    // floor(2^64 / q)
  std::array<std::int32_t, kMaxN> zeta;                // 2^layers bit-reversed twiddles
  std::array<std::int32_t, kMaxN / 2> basecase_gamma;  // kyber: zeta^(2 br7(i) + 1)

  static const Params& kyber();      // n=256, q=3329, root 17, 7 layers
  static const Params& dilithium();  // n=256, q=8380417, root 1753, 8 layers
  static const Params& rot();        // n=512, q=13313, root 7, 9 layers

  bool matches(std::uint16_t pn, std::int32_t pq) const { return pn == n && pq == q; }
};

/// A ring element. Coefficients are held in the canonical range [0, q) at
/// every public-operation boundary; (n, q) tag the parameter set so a
/// mismatched Params is caught by assertion.
struct Poly {
  std::uint16_t n = 0;
  std::int32_t q = 0;
  std::array<std::int32_t, kMaxN> c{};
};

/// Fixed-capacity vector of ring elements (module rank <= 6).
inline constexpr std::size_t kMaxVec = 6;
struct PolyVec {
  std::uint8_t len = 0;
  std::array<Poly, kMaxVec> at{};
};

Poly zero(const Params& p);

// Branch-free modular primitives. All inputs canonical unless noted.
std::int32_t addmod(std::int32_t a, std::int32_t b, const Params& p);
std::int32_t submod(std::int32_t a, std::int32_t b, const Params& p);
std::int32_t mulmod(std::int32_t a, std::int32_t b, const Params& p);
/// Barrett reduction of an arbitrary 64-bit value into [0, q).
std::int32_t reduce64(std::uint64_t x, const Params& p);

/// In-place forward NTT (standard domain -> NTT domain). Exact integer map;
/// round-trips bit-exactly with ntt_inverse.
void ntt_forward(Poly& f, const Params& p);
/// In-place inverse NTT including the 2^-layers scaling.
void ntt_inverse(Poly& f, const Params& p);

/// Pointwise product of two NTT-domain elements (degree-1 basecase products
/// for the incomplete Kyber transform).
Poly pointwise(const Poly& a, const Poly& b, const Params& p);

/// Negacyclic product of two standard-domain elements, routed through the NTT.
Poly poly_mul(const Poly& a, const Poly& b, const Params& p);

Poly poly_add(const Poly& a, const Poly& b, const Params& p);
Poly poly_sub(const Poly& a, const Poly& b, const Params& p);

/// Rejection-samples n coefficients uniform in [0, q) from an initialized
/// XOF squeezer. Candidates are read LSB-first, sample_stride bits apart,
/// masked to sample_bits bits. Deterministic given the squeezer's seed.
Poly sample_uniform(keccak::Sponge& xof, const Params& p);

/// Centered binomial noise: coefficient i is wt(a_i) - wt(b_i) for
/// consecutive eta-bit groups a_i, b_i read LSB-first from `bytes`.
/// Requires bytes.size() == n*eta/4 and eta in {2, 3}. Output canonical.
Poly sample_cbd(std::span<const std::uint8_t> bytes, int eta, const Params& p);

}  // namespace qtpm::ring

#endif  // QTPM_RING_HPP
