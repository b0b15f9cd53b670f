#if defined(__aarch64__)

#include <arm_neon.h>

#include "gnc/kernels.hpp"

namespace gnc::kern {

void xor_row_neon(uint8_t* dst, const uint8_t* src, size_t n) {
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    uint8x16_t a = vld1q_u8(dst + i);
    uint8x16_t b = vld1q_u8(src + i);
    vst1q_u8(dst + i, veorq_u8(a, b));
  }
  if (i < n) xor_row_scalar(dst + i, src + i, n - i);
}

void muladd_row_neon(uint8_t* dst, const uint8_t* src, size_t n, MulTables t) {
  const uint8x16_t lo = vld1q_u8(t.lo);
  const uint8x16_t hi = vld1q_u8(t.hi);
  const uint8x16_t mask = vdupq_n_u8(0x0f);
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    uint8x16_t s = vld1q_u8(src + i);
    uint8x16_t pl = vqtbl1q_u8(lo, vandq_u8(s, mask));
    uint8x16_t ph = vqtbl1q_u8(hi, vshrq_n_u8(s, 4));
    uint8x16_t d = vld1q_u8(dst + i);
    vst1q_u8(dst + i, veorq_u8(d, veorq_u8(pl, ph)));
  }
  if (i < n) muladd_row_scalar(dst + i, src + i, n - i, t);
}

void scale_row_neon(uint8_t* dst, size_t n, MulTables t) {
  const uint8x16_t lo = vld1q_u8(t.lo);
  const uint8x16_t hi = vld1q_u8(t.hi);
  const uint8x16_t mask = vdupq_n_u8(0x0f);
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    uint8x16_t s = vld1q_u8(dst + i);
    uint8x16_t pl = vqtbl1q_u8(lo, vandq_u8(s, mask));
    uint8x16_t ph = vqtbl1q_u8(hi, vshrq_n_u8(s, 4));
    vst1q_u8(dst + i, veorq_u8(pl, ph));
  }
  if (i < n) scale_row_scalar(dst + i, n - i, t);
}

}  // namespace gnc::kern

#endif
