// Copyright (c) 2026 The qtpm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QTPM_KECCAK_HPP
#define QTPM_KECCAK_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace qtpm::keccak {

/// The 1600-bit Keccak state: 25 lanes of 64 bits (5x5 matrix, row-major).
struct State {
  std::array<std::uint64_t, 25> lanes{};
};

/// Keccak-f[1600], 24 rounds. Bijective on states.
void permute(State& st);

/// Incremental sponge over Keccak-f[1600].
///
/// Absorb any number of byte chunks, then squeeze any number of output
/// chunks; squeezing n+m bytes equals squeezing n then m. The FIPS 202
/// domain suffix (0x06 for SHA-3, 0x1f for SHAKE) is applied on the first
/// squeeze. Byte-oriented only.
class Sponge {
 public:
  Sponge(std::size_t rate_bytes, std::uint8_t domain_suffix)
      : rate_(rate_bytes), suffix_(domain_suffix) {}

  void absorb(std::span<const std::uint8_t> data);
  void squeeze(std::span<std::uint8_t> out);

 private:
  void pad_and_switch();

  State st_{};
  std::size_t rate_;
  std::uint8_t suffix_;
  std::size_t pos_ = 0;
  bool squeezing_ = false;
};

inline Sponge make_sha3_256() { return Sponge(136, 0x06); }
inline Sponge make_sha3_512() { return Sponge(72, 0x06); }
inline Sponge make_shake128() { return Sponge(168, 0x1f); }
inline Sponge make_shake256() { return Sponge(136, 0x1f); }

void sha3_256(std::span<const std::uint8_t> msg, std::span<std::uint8_t> out32);
void sha3_512(std::span<const std::uint8_t> msg, std::span<std::uint8_t> out64);
void shake128(std::span<const std::uint8_t> msg, std::span<std::uint8_t> out);
void shake256(std::span<const std::uint8_t> msg, std::span<std::uint8_t> out);

}  // namespace qtpm::keccak

#endif  // QTPM_KECCAK_HPP
