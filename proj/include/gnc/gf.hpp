#pragma once

#include <cstdint>
#include <vector>

#include "gnc/error.hpp"
#include "gnc/kernels.hpp"

namespace gnc {

// Packed payload: symbols at m bits each, 8/m per byte.
using Payload = std::vector<uint8_t>;

// Arithmetic over GF(2^m), m in {1,4,8}, with a fixed primitive polynomial.
// Payload symbols are packed 8/m to the byte; all row kernels operate on the
// packed representation.
class FieldContext {
 public:
  FieldContext(unsigned m, unsigned prim_poly);

  // Shared immutable context with the default polynomial for this m:
  // m=1: x+1, m=4: x^4+x+1 (0x13), m=8: x^8+x^4+x^3+x^2+1 (0x11d).
  static const FieldContext& of(unsigned m);
  static const FieldContext& of_q(unsigned q);

  unsigned m() const { return m_; }
  unsigned q() const { return q_; }
  unsigned prim_poly() const { return poly_; }

  uint8_t add(uint8_t a, uint8_t b) const { return a ^ b; }

  uint8_t mul(uint8_t a, uint8_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  uint8_t inv(uint8_t a) const {
    if (a == 0) throw Error("ff_inv: no inverse for zero");
    return exp_[(q_ - 1) - log_[a]];
  }

  // Tables for dst ^= c * src on packed payload rows.
  kern::MulTables mul_tables(uint8_t c) const {
    return {fused_.data() + size_t(c) * 256, nib_lo_.data() + size_t(c) * 16,
            nib_hi_.data() + size_t(c) * 16};
  }

  unsigned symbols_per_byte() const { return 8u / m_; }
  size_t packed_bytes(size_t symbols) const {
    return (symbols * m_ + 7) / 8;
  }

 private:
  unsigned m_, q_, poly_;
  std::vector<uint8_t> exp_;     // 2*(q-1) entries, wraparound copy
  std::vector<uint8_t> log_;     // q entries, log_[0] unused
  std::vector<uint8_t> fused_;   // q * 256
  std::vector<uint8_t> nib_lo_;  // q * 16
  std::vector<uint8_t> nib_hi_;  // q * 16
};

}  // namespace gnc
