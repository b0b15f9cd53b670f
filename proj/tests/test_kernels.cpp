#include "doctest.h"

#include <vector>

#include "gnc/gf.hpp"
#include "gnc/kernels.hpp"
#include "gnc/rng.hpp"
#include "oracles.hpp"

namespace kern = gnc::kern;
using gnc::FieldContext;

namespace {
std::vector<uint8_t> random_buf(gnc::Rng& rng, size_t n) {
  std::vector<uint8_t> v(n);
  rng.fill(v);
  return v;
}
}  // namespace

TEST_CASE("SIMD backends match the scalar reference kernels exactly") {
  auto backends = kern::available();
  REQUIRE(!backends.empty());
  gnc::Rng rng(99);
  const size_t sizes[] = {0, 1, 7, 15, 31, 32, 33, 63, 64, 100, 257};
  for (unsigned m : {1u, 4u, 8u}) {
    const auto& ctx = FieldContext::of(m);
    for (size_t n : sizes) {
      auto src = random_buf(rng, n);
      auto dst0 = random_buf(rng, n);
      auto c = uint8_t(rng.below(ctx.q()));
      auto t = ctx.mul_tables(c);

      auto want_x = dst0, want_m = dst0, want_s = dst0;
      kern::xor_row_scalar(want_x.data(), src.data(), n);
      kern::muladd_row_scalar(want_m.data(), src.data(), n, t);
      kern::scale_row_scalar(want_s.data(), n, t);

      for (auto b : backends) {
        kern::select(b);
        auto got = dst0;
        kern::xor_row(got.data(), src.data(), n);
        CHECK(got == want_x);
        got = dst0;
        kern::muladd_row(got.data(), src.data(), n, t);
        CHECK(got == want_m);
        got = dst0;
        kern::scale_row(got.data(), n, t);
        CHECK(got == want_s);
      }
    }
  }
  kern::select(kern::detect());
}

TEST_CASE("muladd_row agrees with symbol-wise field multiplication") {
  gnc::Rng rng(7);
  for (unsigned m : {1u, 4u, 8u}) {
    const auto& ctx = FieldContext::of(m);
    const size_t n = 64;
    auto src = random_buf(rng, n);
    auto dst = random_buf(rng, n);
    auto c = uint8_t(rng.below(ctx.q()));
    auto got = dst;
    kern::muladd_row(got.data(), src.data(), n, ctx.mul_tables(c));
    const unsigned spb = ctx.symbols_per_byte();
    const unsigned mask = (1u << m) - 1u;
    for (size_t i = 0; i < n; ++i) {
      unsigned expect = 0;
      for (unsigned s = 0; s < spb; ++s) {
        auto d = uint8_t((dst[i] >> (s * m)) & mask);
        auto x = uint8_t((src[i] >> (s * m)) & mask);
        expect |= unsigned(d ^ ctx.mul(c, x)) << (s * m);
      }
      CHECK(got[i] == expect);
    }
  }
}

TEST_CASE("backend selection reports names and the detected default") {
  auto b = kern::detect();
  kern::select(b);
  CHECK(kern::active() == b);
  CHECK(kern::name(kern::Backend::scalar) == std::string("scalar"));
  for (auto avail : kern::available())
    CHECK(kern::name(avail) != std::string("?"));
}
