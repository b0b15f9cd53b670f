#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gnc {

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// xoshiro256** seeded through splitmix64. Self-contained so that streams are
// reproducible across platforms and standard library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, bound). Mask rejection keeps the draw exact.
  uint64_t below(uint64_t bound) {
    if (bound <= 1) return 0;
    uint64_t mask = ~uint64_t{0} >> __builtin_clzll(bound - 1 | 1);
    uint64_t v;
    do {
      v = next() & mask;
    } while (v >= bound);
    return v;
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // One field element of m bits.
  uint8_t field_element(unsigned m) {
    return static_cast<uint8_t>(next() & ((1u << m) - 1u));
  }

  void fill(std::span<uint8_t> buf) {
    size_t i = 0;
    while (i + 8 <= buf.size()) {
      uint64_t v = next();
      for (int b = 0; b < 8; ++b) buf[i++] = static_cast<uint8_t>(v >> (8 * b));
    }
    if (i < buf.size()) {
      uint64_t v = next();
      while (i < buf.size()) {
        buf[i++] = static_cast<uint8_t>(v);
        v >>= 8;
      }
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent stream derived from this one's seed lineage.
  Rng fork(uint64_t tag) const {
    uint64_t mix = s_[0] ^ rotl(s_[3], 13) ^ (tag * 0x9e3779b97f4a7c15ull);
    return Rng(mix);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace gnc
