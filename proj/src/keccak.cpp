// Copyright (c) 2026 The qtpm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qtpm/keccak.hpp"

#include <bit>
#include <cassert>

// Lane bytes are accessed through the state directly; Keccak's byte order
// within a lane is little-endian.
static_assert(std::endian::native == std::endian::little);

namespace qtpm::keccak {
namespace {

constexpr int kRounds = 24;

constexpr std::uint64_t kRoundConstants[kRounds] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// rho rotation offsets and pi lane permutation, lane index = x + 5*y
constexpr unsigned kRho[25] = {0,  1,  62, 28, 27, 36, 44, 6,  55, 20, 3,  10, 43,
                               25, 39, 41, 45, 15, 21, 8,  18, 2,  61, 56, 14};

inline std::uint64_t rotl(std::uint64_t v, unsigned r) {
  return r == 0 ? v : (v << r) | (v >> (64 - r));
}

}  // namespace

void permute(State& st) {
  auto& a = st.lanes;
  for (int round = 0; round < kRounds; round++) {
    // theta
    std::uint64_t c[5], d[5];
    for (int x = 0; x < 5; x++)
      c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
    for (int x = 0; x < 5; x++) {
      d[x] = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
      for (int y = 0; y < 5; y++) a[x + 5 * y] ^= d[x];
    }
    // rho + pi
    std::uint64_t b[25];
    for (int x = 0; x < 5; x++)
      for (int y = 0; y < 5; y++)
        b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl(a[x + 5 * y], kRho[x + 5 * y]);
    // chi
    for (int y = 0; y < 5; y++)
      for (int x = 0; x < 5; x++)
        a[x + 5 * y] = b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
    // iota
    a[0] ^= kRoundConstants[round];
  }
}

void Sponge::absorb(std::span<const std::uint8_t> data) {
  assert(!squeezing_);
  auto* lane_bytes = reinterpret_cast<std::uint8_t*>(st_.lanes.data());
  for (std::uint8_t byte : data) {
    lane_bytes[pos_++] ^= byte;
    if (pos_ == rate_) {
      permute(st_);
      pos_ = 0;
    }
  }
}

void Sponge::pad_and_switch() {
  auto* lane_bytes = reinterpret_cast<std::uint8_t*>(st_.lanes.data());
  lane_bytes[pos_] ^= suffix_;
  lane_bytes[rate_ - 1] ^= 0x80;
  permute(st_);
  pos_ = 0;
  squeezing_ = true;
}

void Sponge::squeeze(std::span<std::uint8_t> out) {
  if (!squeezing_) pad_and_switch();
  const auto* lane_bytes = reinterpret_cast<const std::uint8_t*>(st_.lanes.data());
  for (auto& byte : out) {
    if (pos_ == rate_) {
      permute(st_);
      pos_ = 0;
    }
    byte = lane_bytes[pos_++];
  }
}

void sha3_256(std::span<const std::uint8_t> msg, std::span<std::uint8_t> out32) {
  assert(out32.size() == 32);
  Sponge s = make_sha3_256();
  s.absorb(msg);
  s.squeeze(out32);
}

void sha3_512(std::span<const std::uint8_t> msg, std::span<std::uint8_t> out64) {
  assert(out64.size() == 64);
  Sponge s = make_sha3_512();
  s.absorb(msg);
  s.squeeze(out64);
}

void shake128(std::span<const std::uint8_t> msg, std::span<std::uint8_t> out) {
  Sponge s = make_shake128();
  s.absorb(msg);
  s.squeeze(out);
}

void shake256(std::span<const std::uint8_t> msg, std::span<std::uint8_t> out) {
  Sponge s = make_shake256();
  s.absorb(msg);
  s.squeeze(out);
}

}  // namespace qtpm::keccak
