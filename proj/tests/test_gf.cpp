#include "doctest.h"

#include "gnc/gf.hpp"
#include "gnc/rng.hpp"
#include "oracles.hpp"

using gnc::FieldContext;

TEST_CASE("multiplicative identity and GF(2) basics") {
  for (unsigned m : {1u, 4u, 8u}) {
    const auto& ctx = FieldContext::of(m);
    for (unsigned a = 0; a < ctx.q(); ++a)
      CHECK(ctx.mul(uint8_t(a), 1) == a);
  }
  const auto& gf2 = FieldContext::of(1);
  CHECK(gf2.mul(1, 1) == 1);
  CHECK(gf2.mul(1, 0) == 0);
  CHECK(gf2.inv(1) == 1);
}

TEST_CASE("GF(16) multiplication matches brute-force polynomial arithmetic") {
  const auto& ctx = FieldContext::of(4);
  CHECK(ctx.mul(0x8, 0x2) == 0x3);  // x^3 * x = x^4 = x + 1 mod x^4+x+1
  for (unsigned a = 0; a < 16; ++a)
    for (unsigned b = 0; b < 16; ++b)
      CHECK(ctx.mul(uint8_t(a), uint8_t(b)) ==
            oracle::gf_mul(4, 0x13, uint8_t(a), uint8_t(b)));
}

TEST_CASE("GF(256) multiplication matches brute force on random pairs") {
  const auto& ctx = FieldContext::of(8);
  gnc::Rng rng(11);
  for (int i = 0; i < 20000; ++i) {
    auto a = uint8_t(rng.below(256)), b = uint8_t(rng.below(256));
    CHECK(ctx.mul(a, b) == oracle::gf_mul(8, 0x11d, a, b));
  }
}

TEST_CASE("every nonzero element has a working inverse") {
  for (unsigned m : {1u, 4u, 8u}) {
    const auto& ctx = FieldContext::of(m);
    for (unsigned a = 1; a < ctx.q(); ++a)
      CHECK(ctx.mul(uint8_t(a), ctx.inv(uint8_t(a))) == 1);
  }
  CHECK_THROWS_AS((void)FieldContext::of(8).inv(0), gnc::Error);
}

TEST_CASE("field axioms") {
  const auto& gf16 = FieldContext::of(4);
  for (unsigned a = 0; a < 16; ++a)
    for (unsigned b = 0; b < 16; ++b) {
      CHECK(gf16.mul(uint8_t(a), uint8_t(b)) == gf16.mul(uint8_t(b), uint8_t(a)));
      for (unsigned c = 0; c < 16; ++c) {
        CHECK(gf16.mul(gf16.mul(uint8_t(a), uint8_t(b)), uint8_t(c)) ==
              gf16.mul(uint8_t(a), gf16.mul(uint8_t(b), uint8_t(c))));
        CHECK(gf16.mul(uint8_t(a), uint8_t(b) ^ uint8_t(c)) ==
              (gf16.mul(uint8_t(a), uint8_t(b)) ^ gf16.mul(uint8_t(a), uint8_t(c))));
      }
    }
  const auto& gf256 = FieldContext::of(8);
  gnc::Rng rng(3);
  for (int i = 0; i < 50000; ++i) {
    auto a = uint8_t(rng.below(256)), b = uint8_t(rng.below(256)),
         c = uint8_t(rng.below(256));
    CHECK(gf256.mul(a, b) == gf256.mul(b, a));
    CHECK(gf256.mul(gf256.mul(a, b), c) == gf256.mul(a, gf256.mul(b, c)));
    CHECK(gf256.mul(a, uint8_t(b ^ c)) ==
          (gf256.mul(a, b) ^ gf256.mul(a, c)));
  }
}

TEST_CASE("construction rejects bad parameters") {
  CHECK_THROWS_AS(FieldContext(4, 0x16), gnc::ConfigError);  // not primitive
  CHECK_THROWS_AS(FieldContext(3, 0xb), gnc::ConfigError);   // unsupported width
  CHECK_THROWS_AS(FieldContext(8, 0x3), gnc::ConfigError);   // degree mismatch
  CHECK_THROWS_AS(FieldContext::of_q(64), gnc::ConfigError);
}

TEST_CASE("packed symbol accounting") {
  CHECK(FieldContext::of(8).packed_bytes(25) == 25);
  CHECK(FieldContext::of(4).packed_bytes(25) == 13);
  CHECK(FieldContext::of(1).packed_bytes(25) == 4);
  CHECK(FieldContext::of(4).symbols_per_byte() == 2);
}
