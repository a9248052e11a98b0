// Copyright (c) 2026 The qtpm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QTPM_KYBER_HPP
#define QTPM_KYBER_HPP

#include <cstddef>
#include <cstdint>
#include <span>

#include "qtpm/rng.hpp"

namespace qtpm::kyber {

// Kyber-768, round-3 parameterization: k=3, eta1=eta2=2, du=10, dv=4.
inline constexpr std::size_t kSeedBytes = 32;
inline constexpr std::size_t kPublicKeyBytes = 1184;   // 3*384 + 32
inline constexpr std::size_t kSecretKeyBytes = 2400;   // 1152 + 1184 + 32 + 32
inline constexpr std::size_t kCiphertextBytes = 1088;  // (3*256*10 + 256*4) / 8
inline constexpr std::size_t kSharedSecretBytes = 32;

/// Deterministic CCA keypair from the two 32-byte seeds (d for the CPA key
/// material, z for implicit rejection).
void keygen(std::span<const std::uint8_t> seed_d, std::span<const std::uint8_t> seed_z,
            std::span<std::uint8_t> pk_out, std::span<std::uint8_t> sk_out);

/// Encapsulation. seed_m is the 32-byte random input (hashed internally per
/// the CCA transform); deterministic given (pk, seed_m).
/// Returns false only on a malformed pk length.
bool encapsulate(std::span<const std::uint8_t> pk, std::span<const std::uint8_t> seed_m,
                 std::span<std::uint8_t> ct_out, std::span<std::uint8_t> ss_out);

/// Decapsulation with implicit rejection: a tampered ciphertext yields the
/// deterministic rejection secret derived from z, never an error.
/// Returns false only on malformed lengths.
bool decapsulate(std::span<const std::uint8_t> sk, std::span<const std::uint8_t> ct,
                 std::span<std::uint8_t> ss_out);

// Hybrid data encryption used by the TPM data commands:
//   KEM ct (1088) || nonce (16) || pad-encrypted payload || tag (32)
// pad = SHAKE256(ss || nonce, len), tag = SHA3-256(ss || plaintext).
inline constexpr std::size_t kMaxDataBytes = 1024;
inline constexpr std::size_t kNonceBytes = 16;
inline constexpr std::size_t kTagBytes = 32;

constexpr std::size_t sealed_bytes(std::size_t plaintext_len) {
  return kCiphertextBytes + kNonceBytes + plaintext_len + kTagBytes;
}

enum class DataStatus : std::uint8_t { kOk, kBadLength, kIntegrityFail };

/// out must hold sealed_bytes(plaintext.size()); fails on oversize plaintext.
DataStatus data_encrypt(std::span<const std::uint8_t> pk, std::span<const std::uint8_t> plaintext,
                        Rng& rng, std::span<std::uint8_t> out, std::size_t& out_len);

/// out must hold kMaxDataBytes. Tampered payloads report kIntegrityFail,
/// never garbage plaintext.
DataStatus data_decrypt(std::span<const std::uint8_t> sk, std::span<const std::uint8_t> sealed,
                        std::span<std::uint8_t> out, std::size_t& out_len);

}  // namespace qtpm::kyber

#endif  // QTPM_KYBER_HPP
