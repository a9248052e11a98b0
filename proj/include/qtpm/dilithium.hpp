// Copyright (c) 2026 The qtpm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QTPM_DILITHIUM_HPP
#define QTPM_DILITHIUM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace qtpm::dilithium {

// Dilithium level III, round-3 parameterization:
// k=6, l=5, eta=4, tau=49, beta=196, gamma1=2^19, gamma2=(q-1)/32, omega=55.
inline constexpr std::size_t kSeedBytes = 32;
inline constexpr std::size_t kPublicKeyBytes = 1952;  // 32 + 6*320
inline constexpr std::size_t kSecretKeyBytes = 4000;  // 3*32 + 5*128 + 6*128 + 6*416
inline constexpr std::size_t kSignatureBytes = 3293;  // 32 + 5*640 + 55 + 6

/// Deterministic keypair from a 32-byte seed.
void keygen(std::span<const std::uint8_t> seed, std::span<std::uint8_t> pk_out,
            std::span<std::uint8_t> sk_out);

/// Deterministic signature. The rejection loop is capped at 1000 candidate
/// vectors (never reached in practice); returns false only on that cap.
bool sign(std::span<const std::uint8_t> sk, std::span<const std::uint8_t> msg,
          std::span<std::uint8_t> sig_out);

/// Strict verification: any malformed length, norm violation, hint-encoding
/// violation, or challenge mismatch rejects.
bool verify(std::span<const std::uint8_t> pk, std::span<const std::uint8_t> msg,
            std::span<const std::uint8_t> sig);

// Rounding helpers (q = 8380417, d = 13, alpha = 2*gamma2). Exposed for the
// property tests; inputs are canonical representatives in [0, q).
std::pair<std::int32_t, std::int32_t> power2round(std::int32_t r);           // (r1, r0)
std::pair<std::int32_t, std::int32_t> decompose(std::int32_t r);             // (r1, r0)
std::int32_t highbits(std::int32_t r);
bool make_hint(std::int32_t z_centered, std::int32_t r);
std::int32_t use_hint(bool hint, std::int32_t r);

}  // namespace qtpm::dilithium

#endif  // QTPM_DILITHIUM_HPP
