#pragma once

#include <cstdint>
#include <vector>

#include "gnc/degree.hpp"
#include "gnc/gf.hpp"
#include "gnc/rng.hpp"

namespace gnc {

enum class OuterMode { dense_check, packet_level };

struct DenseEntry {
  uint32_t packet;
  uint8_t coeff;
};

struct OuterCheck {
  // Distinct generations this check constrains.
  std::vector<uint32_t> generations;
  // packet_level: member packets, one per generation; the last one is the
  // designated parity.
  std::vector<uint32_t> packets;
  // dense_check: the recorded equation sum_(p,c) c*u_p = 0, captured against
  // the packets available when the check's parity was produced.
  std::vector<DenseEntry> record;
};

// Random linear outer code instance. Construction consumes randomness, so
// sender and receiver rebuild identical graphs from a shared seed; encoding
// itself is deterministic.
class OuterGraph {
 public:
  static OuterGraph build(const FieldContext& ctx, OuterMode mode, unsigned n,
                          unsigned g, unsigned K, const DegreeDistribution& p,
                          Rng& rng, unsigned max_attempts = 200);

  OuterMode mode() const { return mode_; }
  unsigned n() const { return n_; }
  unsigned g() const { return g_; }
  unsigned K() const { return K_; }
  unsigned N() const { return n_ * g_; }
  size_t num_checks() const { return checks_.size(); }
  const std::vector<OuterCheck>& checks() const { return checks_; }

  // Pre-coded packet t lives at outer position systematic_map()[t].
  const std::vector<uint32_t>& systematic_map() const { return sysmap_; }
  const std::vector<unsigned>& systematic_counts() const { return m_; }
  const std::vector<uint32_t>& encode_order() const { return order_; }
  double mean_check_degree() const { return dbar_; }

  std::vector<Payload> encode(const std::vector<Payload>& precoded) const;
  bool verify_checks(const std::vector<Payload>& block) const;

 private:
  const FieldContext* ctx_ = nullptr;
  OuterMode mode_ = OuterMode::dense_check;
  unsigned n_ = 0, g_ = 0, K_ = 0;
  double dbar_ = 0;
  std::vector<OuterCheck> checks_;
  std::vector<uint32_t> sysmap_;
  std::vector<unsigned> m_;
  std::vector<uint32_t> order_;
  // dense mode: parity packet index of each check, in encode order per gen
  std::vector<std::vector<uint32_t>> parity_checks_;  // per gen: check ids
};

// Systematic packet counts m_i = g - [d_i / d-bar], clamped to [0, g], then
// adjusted one unit at a time in `order` so that they sum to K. Rounding is
// half-to-even.
std::vector<unsigned> systematic_layout(const std::vector<unsigned>& gen_degree,
                                        double mean_check_degree, unsigned g,
                                        unsigned K,
                                        const std::vector<uint32_t>& order);

}  // namespace gnc
