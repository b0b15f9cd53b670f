#include "gnc/gf.hpp"

#include <string>

namespace gnc {

FieldContext::FieldContext(unsigned m, unsigned prim_poly)
    : m_(m), q_(1u << m), poly_(prim_poly) {
  if (m != 1 && m != 4 && m != 8)
    throw ConfigError("FieldContext: m must be 1, 4, or 8");
  if ((prim_poly >> m) != 1u)
    throw ConfigError("FieldContext: polynomial degree must equal m");

  // Build exp/log by repeated multiplication by x. The generator must cycle
  // through all q-1 nonzero elements, which certifies the polynomial is
  // primitive (hence irreducible).
  exp_.assign(2 * (q_ - 1) + 1, 0);
  log_.assign(q_, 0);
  std::vector<bool> seen(q_, false);
  unsigned x = 1;
  for (unsigned i = 0; i < q_ - 1; ++i) {
    if (seen[x]) throw ConfigError("FieldContext: polynomial is not primitive");
    seen[x] = true;
    exp_[i] = static_cast<uint8_t>(x);
    log_[x] = static_cast<uint8_t>(i);
    x <<= 1;
    if (x & q_) x ^= prim_poly;
  }
  if (x != 1) throw ConfigError("FieldContext: polynomial is not primitive");
  for (unsigned i = q_ - 1; i <= 2 * (q_ - 1); ++i) exp_[i] = exp_[i - (q_ - 1)];

  for (unsigned a = 1; a < q_; ++a) {
    if (mul(static_cast<uint8_t>(a), inv(static_cast<uint8_t>(a))) != 1)
      throw ConfigError("FieldContext: inverse check failed");
  }

  // Packed-symbol multiplication tables, one set per coefficient.
  fused_.assign(size_t(q_) * 256, 0);
  nib_lo_.assign(size_t(q_) * 16, 0);
  nib_hi_.assign(size_t(q_) * 16, 0);
  for (unsigned c = 0; c < q_; ++c) {
    uint8_t* fused = fused_.data() + size_t(c) * 256;
    uint8_t* lo = nib_lo_.data() + size_t(c) * 16;
    uint8_t* hi = nib_hi_.data() + size_t(c) * 16;
    switch (m_) {
      case 8:
        for (unsigned b = 0; b < 256; ++b)
          fused[b] = mul(static_cast<uint8_t>(c), static_cast<uint8_t>(b));
        for (unsigned x4 = 0; x4 < 16; ++x4) {
          lo[x4] = mul(static_cast<uint8_t>(c), static_cast<uint8_t>(x4));
          hi[x4] = mul(static_cast<uint8_t>(c), static_cast<uint8_t>(x4 << 4));
        }
        break;
      case 4:
        for (unsigned b = 0; b < 256; ++b) {
          uint8_t plo = mul(static_cast<uint8_t>(c), static_cast<uint8_t>(b & 15));
          uint8_t phi = mul(static_cast<uint8_t>(c), static_cast<uint8_t>(b >> 4));
          fused[b] = static_cast<uint8_t>(plo | (phi << 4));
        }
        for (unsigned x4 = 0; x4 < 16; ++x4) {
          lo[x4] = mul(static_cast<uint8_t>(c), static_cast<uint8_t>(x4));
          hi[x4] = static_cast<uint8_t>(
              mul(static_cast<uint8_t>(c), static_cast<uint8_t>(x4)) << 4);
        }
        break;
      case 1:
        for (unsigned b = 0; b < 256; ++b)
          fused[b] = c ? static_cast<uint8_t>(b) : 0;
        for (unsigned x4 = 0; x4 < 16; ++x4) {
          lo[x4] = c ? static_cast<uint8_t>(x4) : 0;
          hi[x4] = c ? static_cast<uint8_t>(x4 << 4) : 0;
        }
        break;
    }
  }
}

const FieldContext& FieldContext::of(unsigned m) {
  static const FieldContext gf2(1, 0x3);
  static const FieldContext gf16(4, 0x13);
  static const FieldContext gf256(8, 0x11d);
  switch (m) {
    case 1: return gf2;
    case 4: return gf16;
    case 8: return gf256;
    default: throw ConfigError("FieldContext::of: m must be 1, 4, or 8");
  }
}

const FieldContext& FieldContext::of_q(unsigned q) {
  switch (q) {
    case 2: return of(1);
    case 16: return of(4);
    case 256: return of(8);
    default:
      throw ConfigError("FieldContext::of_q: q must be 2, 16, or 256, got " +
                        std::to_string(q));
  }
}

}  // namespace gnc
