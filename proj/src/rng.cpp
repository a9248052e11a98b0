// Copyright (c) 2026 The qtpm Authors
// SPDX-License-Identifier: Apache-2.0

#include "qtpm/rng.hpp"

#include <unistd.h>

#include <cassert>
#include <cstdlib>

namespace qtpm {

void SystemRng::fill(std::span<std::uint8_t> out) {
  assert(out.size() <= 1024);
  std::size_t done = 0;
  while (done < out.size()) {
    const std::size_t chunk = std::min<std::size_t>(256, out.size() - done);
    if (getentropy(out.data() + done, chunk) != 0) abort();
    done += chunk;
  }
}

XofRng::XofRng(std::span<const std::uint8_t> seed) : stream_(keccak::make_shake256()) {
  static constexpr std::uint8_t kLabel[] = {'q', 't', 'p', 'm', '-', 'r', 'n', 'g'};
  stream_.absorb(kLabel);
  stream_.absorb(seed);
}

void XofRng::fill(std::span<std::uint8_t> out) {
  assert(out.size() <= 1024);
  stream_.squeeze(out);
}

}  // namespace qtpm
