#include "gnc/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace gnc::kern {

void xor_row_scalar(uint8_t* dst, const uint8_t* src, size_t n) {
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    uint64_t a, b;
    __builtin_memcpy(&a, dst + i, 8);
    __builtin_memcpy(&b, src + i, 8);
    a ^= b;
    __builtin_memcpy(dst + i, &a, 8);
  }
  for (; i < n; ++i) dst[i] ^= src[i];
}

void muladd_row_scalar(uint8_t* dst, const uint8_t* src, size_t n, MulTables t) {
  const uint8_t* tbl = t.fused;
  for (size_t i = 0; i < n; ++i) dst[i] ^= tbl[src[i]];
}

void scale_row_scalar(uint8_t* dst, size_t n, MulTables t) {
  const uint8_t* tbl = t.fused;
  for (size_t i = 0; i < n; ++i) dst[i] = tbl[dst[i]];
}

XorFn xor_row = &xor_row_scalar;
MulAddFn muladd_row = &muladd_row_scalar;
ScaleFn scale_row = &scale_row_scalar;

namespace {
Backend g_active = Backend::scalar;
bool g_initialized = false;
}  // namespace

Backend detect() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return Backend::avx2;
  return Backend::scalar;
#elif defined(__aarch64__)
  return Backend::neon;
#else
  return Backend::scalar;
#endif
}

std::vector<Backend> available() {
  std::vector<Backend> out{Backend::scalar};
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) out.push_back(Backend::avx2);
#elif defined(__aarch64__)
  out.push_back(Backend::neon);
#endif
  return out;
}

void select(Backend b) {
  bool supported = false;
  for (Backend a : available()) supported = supported || a == b;
  if (!supported) throw std::runtime_error("kernel backend not available on this CPU");
  switch (b) {
    case Backend::scalar:
      xor_row = &xor_row_scalar;
      muladd_row = &muladd_row_scalar;
      scale_row = &scale_row_scalar;
      break;
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
      xor_row = &xor_row_avx2;
      muladd_row = &muladd_row_avx2;
      scale_row = &scale_row_avx2;
      break;
#endif
#if defined(__aarch64__)
    case Backend::neon:
      xor_row = &xor_row_neon;
      muladd_row = &muladd_row_neon;
      scale_row = &scale_row_neon;
      break;
#endif
    default:
      xor_row = &xor_row_scalar;
      muladd_row = &muladd_row_scalar;
      scale_row = &scale_row_scalar;
      b = Backend::scalar;
      break;
  }
  g_active = b;
  g_initialized = true;
}

Backend active() {
  if (!g_initialized) select(detect());
  return g_active;
}

const char* name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "?";
}

namespace {
// Pick the best backend once at startup so library users get SIMD without
// having to call select() themselves.
struct AutoInit {
  AutoInit() { select(detect()); }
} auto_init;
}  // namespace

}  // namespace gnc::kern
