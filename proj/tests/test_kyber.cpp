// Copyright (c) 2026 The qtpm Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "qtpm/kyber.hpp"
#include "support/kat_util.hpp"
#include "support/nist_drbg.hpp"

using namespace qtpm;
using qtpm::test::from_hex;
using qtpm::test::NistDrbg;

namespace {

struct SeededRng final : public Rng {
  explicit SeededRng(std::uint64_t s) : gen(s) {}
  void fill(std::span<std::uint8_t> out) override {
    for (auto& b : out) b = static_cast<std::uint8_t>(gen());
  }
  std::mt19937_64 gen;
};

const char* kPlain = "My super secret. Please don't share.\n";

}  // namespace

TEST_CASE("aes-256 FIPS-197 anchor for the KAT DRBG") {
  const auto key = from_hex("000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
  const auto pt = from_hex("00112233445566778899aabbccddeeff");
  std::uint8_t ct[16];
  test::Aes256 aes(key);
  aes.encrypt_block(pt.data(), ct);
  CHECK(test::to_hex(ct) == "8ea2b7ca516745bfeafc49904b496089");
}

TEST_CASE("kyber768 KAT equivalence with the reference oracle") {
  const auto records = test::parse_rsp(std::string(QTPM_KAT_DIR) + "/PQCkemKAT_2400.rsp");
  REQUIRE(records.size() == 100);

  // the per-count 48-byte seeds come from the DRBG seeded with 00..2f;
  // regenerate them to validate this DRBG port against the official file
  std::vector<std::uint8_t> entropy(48);
  for (int i = 0; i < 48; i++) entropy[i] = static_cast<std::uint8_t>(i);
  NistDrbg master(entropy);

  for (const auto& rec : records) {
    std::vector<std::uint8_t> seed(48);
    master.randombytes(seed);
    REQUIRE(test::to_hex(seed) == test::lower(rec.at("seed")));

    NistDrbg drbg(seed);
    std::uint8_t d[32], z[32], m[32];
    drbg.randombytes(d);
    drbg.randombytes(z);
    drbg.randombytes(m);

    std::vector<std::uint8_t> pk(kyber::kPublicKeyBytes), sk(kyber::kSecretKeyBytes);
    kyber::keygen(d, z, pk, sk);
    REQUIRE(test::to_hex(pk) == test::lower(rec.at("pk")));
    REQUIRE(test::to_hex(sk) == test::lower(rec.at("sk")));

    std::vector<std::uint8_t> ct(kyber::kCiphertextBytes), ss(32), ss2(32);
    REQUIRE(kyber::encapsulate(pk, m, ct, ss));
    REQUIRE(test::to_hex(ct) == test::lower(rec.at("ct")));
    REQUIRE(test::to_hex(ss) == test::lower(rec.at("ss")));
    REQUIRE(kyber::decapsulate(sk, ct, ss2));
    REQUIRE(ss == ss2);
  }
}

TEST_CASE("keygen determinism and sizes") {
  SeededRng rng(99);
  std::uint8_t d[32], z[32];
  rng.fill(d);
  rng.fill(z);
  std::vector<std::uint8_t> pk1(kyber::kPublicKeyBytes), sk1(kyber::kSecretKeyBytes);
  std::vector<std::uint8_t> pk2(kyber::kPublicKeyBytes), sk2(kyber::kSecretKeyBytes);
  kyber::keygen(d, z, pk1, sk1);
  kyber::keygen(d, z, pk2, sk2);
  CHECK(pk1 == pk2);
  CHECK(sk1 == sk2);
  CHECK(pk1.size() == 1184);
  CHECK(sk1.size() == 2400);
}

TEST_CASE("encap/decap round trip over 1000 random seeds") {
  SeededRng rng(17);
  std::uint8_t d[32], z[32], m[32];
  std::vector<std::uint8_t> pk(kyber::kPublicKeyBytes), sk(kyber::kSecretKeyBytes);
  std::vector<std::uint8_t> ct(kyber::kCiphertextBytes), ss(32), ss2(32);
  for (int iter = 0; iter < 1000; iter++) {
    rng.fill(d);
    rng.fill(z);
    rng.fill(m);
    kyber::keygen(d, z, pk, sk);
    REQUIRE(kyber::encapsulate(pk, m, ct, ss));
    REQUIRE(kyber::decapsulate(sk, ct, ss2));
    REQUIRE(ss == ss2);
  }
}

TEST_CASE("implicit rejection is silent and deterministic") {
  SeededRng rng(23);
  std::uint8_t d[32], z[32], m[32];
  rng.fill(d);
  rng.fill(z);
  rng.fill(m);
  std::vector<std::uint8_t> pk(kyber::kPublicKeyBytes), sk(kyber::kSecretKeyBytes);
  kyber::keygen(d, z, pk, sk);
  std::vector<std::uint8_t> ct(kyber::kCiphertextBytes), ss(32);
  REQUIRE(kyber::encapsulate(pk, m, ct, ss));

  for (int iter = 0; iter < 20; iter++) {
    auto bad = ct;
    bad[(iter * 131) % bad.size()] ^= static_cast<std::uint8_t>(1u << (iter % 8));
    std::vector<std::uint8_t> r1(32), r2(32);
    REQUIRE(kyber::decapsulate(sk, bad, r1));
    REQUIRE(kyber::decapsulate(sk, bad, r2));
    CHECK(r1 == r2);      // deterministic for that (sk, ct)
    CHECK(r1 != ss);      // never the honest secret
  }

  // malformed lengths are the only hard errors
  std::vector<std::uint8_t> short_ct(kyber::kCiphertextBytes - 1);
  std::vector<std::uint8_t> out(32);
  CHECK_FALSE(kyber::decapsulate(sk, short_ct, out));
  CHECK_FALSE(kyber::encapsulate(std::vector<std::uint8_t>(5), m, ct, ss));
}

TEST_CASE("hybrid data encryption round-trips the fixed plaintext") {
  SeededRng rng(31);
  std::uint8_t d[32], z[32];
  rng.fill(d);
  rng.fill(z);
  std::vector<std::uint8_t> pk(kyber::kPublicKeyBytes), sk(kyber::kSecretKeyBytes);
  kyber::keygen(d, z, pk, sk);

  const std::span<const std::uint8_t> pt{reinterpret_cast<const std::uint8_t*>(kPlain),
                                         std::strlen(kPlain)};
  std::vector<std::uint8_t> sealed(kyber::sealed_bytes(pt.size()));
  std::size_t sealed_len = 0;
  REQUIRE(kyber::data_encrypt(pk, pt, rng, sealed, sealed_len) == kyber::DataStatus::kOk);
  CHECK(sealed_len == kyber::kCiphertextBytes + kyber::kNonceBytes + pt.size() + kyber::kTagBytes);

  std::vector<std::uint8_t> back(kyber::kMaxDataBytes);
  std::size_t back_len = 0;
  REQUIRE(kyber::data_decrypt(sk, {sealed.data(), sealed_len}, back, back_len) ==
          kyber::DataStatus::kOk);
  REQUIRE(back_len == pt.size());
  CHECK(std::equal(pt.begin(), pt.end(), back.begin()));
}

TEST_CASE("hybrid data encryption edge cases") {
  SeededRng rng(37);
  std::uint8_t d[32], z[32];
  rng.fill(d);
  rng.fill(z);
  std::vector<std::uint8_t> pk(kyber::kPublicKeyBytes), sk(kyber::kSecretKeyBytes);
  kyber::keygen(d, z, pk, sk);

  std::vector<std::uint8_t> sealed(kyber::sealed_bytes(kyber::kMaxDataBytes));
  std::size_t sealed_len = 0;
  std::vector<std::uint8_t> back(kyber::kMaxDataBytes);
  std::size_t back_len = 0;

  SUBCASE("empty plaintext") {
    REQUIRE(kyber::data_encrypt(pk, {}, rng, sealed, sealed_len) == kyber::DataStatus::kOk);
    CHECK(sealed_len == 1088 + 16 + 0 + 32);
    CHECK(kyber::data_decrypt(sk, {sealed.data(), sealed_len}, back, back_len) ==
          kyber::DataStatus::kOk);
    CHECK(back_len == 0);
  }

  SUBCASE("oversize plaintext rejected") {
    std::vector<std::uint8_t> big(kyber::kMaxDataBytes + 1, 0xaa);
    CHECK(kyber::data_encrypt(pk, big, rng, sealed, sealed_len) == kyber::DataStatus::kBadLength);
  }

  SUBCASE("payload bit flip reports integrity failure") {
    std::vector<std::uint8_t> pt(64, 0x5a);
    REQUIRE(kyber::data_encrypt(pk, pt, rng, sealed, sealed_len) == kyber::DataStatus::kOk);
    for (std::size_t pos : {std::size_t{0}, kyber::kCiphertextBytes + 20UL, sealed_len - 1}) {
      auto bad = sealed;
      bad[pos] ^= 1;
      CHECK(kyber::data_decrypt(sk, {bad.data(), sealed_len}, back, back_len) ==
            kyber::DataStatus::kIntegrityFail);
    }
  }

  SUBCASE("truncated ciphertext is a length error") {
    CHECK(kyber::data_decrypt(sk, {sealed.data(), kyber::sealed_bytes(0) - 1}, back, back_len) ==
          kyber::DataStatus::kBadLength);
  }

  SUBCASE("wrong recipient fails integrity, not garbage") {
    std::uint8_t d2[32], z2[32];
    rng.fill(d2);
    rng.fill(z2);
    std::vector<std::uint8_t> pk2(kyber::kPublicKeyBytes), sk2(kyber::kSecretKeyBytes);
    kyber::keygen(d2, z2, pk2, sk2);
    std::vector<std::uint8_t> pt(48, 0x11);
    REQUIRE(kyber::data_encrypt(pk, pt, rng, sealed, sealed_len) == kyber::DataStatus::kOk);
    CHECK(kyber::data_decrypt(sk2, {sealed.data(), sealed_len}, back, back_len) ==
          kyber::DataStatus::kIntegrityFail);
  }
}
