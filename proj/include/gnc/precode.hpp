#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gnc/gf.hpp"
#include "gnc/rng.hpp"

namespace gnc {

// High-rate binary LDPC pre-code: near-regular check degrees filled from a
// permuted socket stream, with a staircase on the parity columns so that
// systematic encoding is a single forward pass.
class PrecodeGraph {
 public:
  // K = round(K'/rate) coded packets; rate 1 means no checks.
  static PrecodeGraph build(unsigned info_count, double rate, Rng& rng);
  // Explicit sizes, for callers that already fixed K.
  static PrecodeGraph build_exact(unsigned info_count, unsigned coded_count,
                                  Rng& rng);

  unsigned info_count() const { return info_count_; }
  unsigned coded_count() const { return coded_count_; }
  double rate() const { return double(info_count_) / double(coded_count_); }
  const std::vector<std::vector<uint32_t>>& checks() const { return checks_; }

  // Systematic: coded[t] = info[t] for t < K', parities by forward
  // substitution through the staircase. Every check XORs to zero.
  std::vector<Payload> encode(const std::vector<Payload>& info) const;

 private:
  unsigned info_count_ = 0, coded_count_ = 0;
  std::vector<std::vector<uint32_t>> checks_;  // sorted member lists
};

// Resolves degree-one checks to fixpoint; returns everything recovered by
// this call. `known[v]` holds the payload of coded packet v when known.
// Throws InconsistentSystem when a fully-known check fails to XOR to zero.
std::vector<std::pair<uint32_t, Payload>> peel_step(
    const PrecodeGraph& graph, std::vector<std::optional<Payload>>& known);

}  // namespace gnc
