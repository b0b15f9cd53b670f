#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace gnc::kern {

enum class Backend { scalar, avx2, neon };

// Per-coefficient multiplication tables owned by FieldContext.
//   fused: 256-entry byte -> product-byte table (packed symbols)
//   lo/hi: 16-entry nibble tables with product(b) = lo[b & 15] ^ hi[b >> 4]
struct MulTables {
  const uint8_t* fused;
  const uint8_t* lo;
  const uint8_t* hi;
};

using XorFn = void (*)(uint8_t* dst, const uint8_t* src, size_t n);
using MulAddFn = void (*)(uint8_t* dst, const uint8_t* src, size_t n, MulTables t);
using ScaleFn = void (*)(uint8_t* dst, size_t n, MulTables t);

void xor_row_scalar(uint8_t* dst, const uint8_t* src, size_t n);
void muladd_row_scalar(uint8_t* dst, const uint8_t* src, size_t n, MulTables t);
void scale_row_scalar(uint8_t* dst, size_t n, MulTables t);

#if defined(__x86_64__) || defined(_M_X64)
void xor_row_avx2(uint8_t* dst, const uint8_t* src, size_t n);
void muladd_row_avx2(uint8_t* dst, const uint8_t* src, size_t n, MulTables t);
void scale_row_avx2(uint8_t* dst, size_t n, MulTables t);
#endif
#if defined(__aarch64__)
void xor_row_neon(uint8_t* dst, const uint8_t* src, size_t n);
void muladd_row_neon(uint8_t* dst, const uint8_t* src, size_t n, MulTables t);
void scale_row_neon(uint8_t* dst, size_t n, MulTables t);
#endif

// Best backend the current CPU supports.
Backend detect();
// Backends usable on this machine (always contains scalar).
std::vector<Backend> available();
// Force a backend; used by tests and the CLI --backend flag.
void select(Backend b);
Backend active();
const char* name(Backend b);

// Active entry points. dst ^= src, dst ^= c*src, dst = c*dst on packed rows.
extern XorFn xor_row;
extern MulAddFn muladd_row;
extern ScaleFn scale_row;

}  // namespace gnc::kern
