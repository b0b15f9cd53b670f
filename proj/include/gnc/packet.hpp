#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gnc/gf.hpp"
#include "gnc/rng.hpp"

namespace gnc {

// One coded packet on the wire: the generation it combines, the coefficient
// vector beta (one field element per packet of the generation), and the
// combined payload.
struct Packet {
  uint16_t gen_index = 0;
  std::vector<uint8_t> coeffs;  // g elements, one per byte
  Payload payload;

  bool operator==(const Packet&) const = default;
};

// Outer-coded block partitioned into n generations of g packets each.
class Block {
 public:
  Block(std::vector<Payload> packets, unsigned g);

  unsigned n() const { return n_; }
  unsigned g() const { return g_; }
  size_t total_packets() const { return packets_.size(); }
  size_t payload_bytes() const { return pay_bytes_; }
  const Payload& packet(size_t index) const { return packets_[index]; }
  const Payload& packet(unsigned gen, unsigned j) const {
    return packets_[size_t(gen) * g_ + j];
  }
  const std::vector<Payload>& packets() const { return packets_; }

 private:
  unsigned n_, g_;
  size_t pay_bytes_;
  std::vector<Payload> packets_;
};

// Generation i holds packets [i*g, (i+1)*g). Throws unless N is a multiple
// of g and all payloads share one length.
Block partition(std::vector<Payload> outer_coded, unsigned g);

// Uniform generation choice, i.i.d. uniform coefficients (zeros allowed),
// payload = coefficient-weighted combination of the generation's packets.
Packet emit_packet(const FieldContext& ctx, const Block& block, Rng& rng);

// Wire format (little-endian):
//   magic 0x47, version 0x01, u16 gen_index, u16 g, u8 m, u8 reserved,
//   g coefficients packed m bits each (LSB-first, padded to a byte),
//   payload (remainder of the buffer).
size_t packet_header_bytes(unsigned g, unsigned m);
std::vector<uint8_t> serialize(const Packet& pkt, unsigned m);
Packet deserialize(std::span<const uint8_t> bytes);

// m-bit element packing used by the wire format.
std::vector<uint8_t> pack_elements(std::span<const uint8_t> elems, unsigned m);
std::vector<uint8_t> unpack_elements(std::span<const uint8_t> bytes,
                                     size_t count, unsigned m);

}  // namespace gnc
