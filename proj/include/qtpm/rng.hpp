// Copyright (c) 2026 The qtpm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QTPM_RNG_HPP
#define QTPM_RNG_HPP

#include <cstdint>
#include <span>

#include "qtpm/keccak.hpp"

namespace qtpm {

/// Randomness source for the TPM. Production uses OS entropy; tests and
/// benchmarks select a seeded deterministic stream so transcripts replay.
class Rng {
 public:
  virtual ~Rng() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

/// OS entropy (getentropy). Requests are split to honor the syscall's
/// 256-byte ceiling; callers are limited to 1024 bytes per fill.
class SystemRng final : public Rng {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic SHAKE256 stream over a seed. Same seed, same stream.
class XofRng final : public Rng {
 public:
  explicit XofRng(std::span<const std::uint8_t> seed);
  void fill(std::span<std::uint8_t> out) override;

 private:
  keccak::Sponge stream_;
};

}  // namespace qtpm

#endif  // QTPM_RNG_HPP
