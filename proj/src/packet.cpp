#include "gnc/packet.hpp"

#include <cstring>
#include <string>

#include "gnc/error.hpp"
#include "gnc/kernels.hpp"

namespace gnc {

namespace {
constexpr uint8_t kMagic = 0x47;
constexpr uint8_t kVersion = 0x01;
}  // namespace

Block::Block(std::vector<Payload> packets, unsigned g)
    : g_(g), packets_(std::move(packets)) {
  if (g == 0) throw ConfigError("Block: g must be positive");
  if (packets_.empty() || packets_.size() % g != 0)
    throw ConfigError("Block: packet count must be a positive multiple of g");
  n_ = static_cast<unsigned>(packets_.size() / g);
  if (n_ > 0xffff)
    throw ConfigError("Block: generation count exceeds the wire format limit");
  pay_bytes_ = packets_[0].size();
  for (const auto& p : packets_)
    if (p.size() != pay_bytes_)
      throw ConfigError("Block: payload lengths differ");
}

Block partition(std::vector<Payload> outer_coded, unsigned g) {
  return Block(std::move(outer_coded), g);
}

Packet emit_packet(const FieldContext& ctx, const Block& block, Rng& rng) {
  Packet pkt;
  pkt.gen_index = static_cast<uint16_t>(rng.below(block.n()));
  pkt.coeffs.resize(block.g());
  for (auto& c : pkt.coeffs) c = rng.field_element(ctx.m());
  pkt.payload.assign(block.payload_bytes(), 0);
  for (unsigned j = 0; j < block.g(); ++j) {
    uint8_t c = pkt.coeffs[j];
    if (c == 0) continue;
    const Payload& u = block.packet(pkt.gen_index, j);
    if (c == 1)
      kern::xor_row(pkt.payload.data(), u.data(), u.size());
    else
      kern::muladd_row(pkt.payload.data(), u.data(), u.size(),
                       ctx.mul_tables(c));
  }
  return pkt;
}

std::vector<uint8_t> pack_elements(std::span<const uint8_t> elems, unsigned m) {
  std::vector<uint8_t> out((elems.size() * m + 7) / 8, 0);
  for (size_t j = 0; j < elems.size(); ++j) {
    size_t bit = j * m;
    uint16_t window = static_cast<uint16_t>(elems[j] & ((1u << m) - 1))
                      << (bit % 8);
    out[bit / 8] |= static_cast<uint8_t>(window);
    if ((bit % 8) + m > 8) out[bit / 8 + 1] |= static_cast<uint8_t>(window >> 8);
  }
  return out;
}

std::vector<uint8_t> unpack_elements(std::span<const uint8_t> bytes,
                                     size_t count, unsigned m) {
  std::vector<uint8_t> out(count, 0);
  for (size_t j = 0; j < count; ++j) {
    size_t bit = j * m;
    uint16_t window = bytes[bit / 8];
    if ((bit % 8) + m > 8 && bit / 8 + 1 < bytes.size())
      window |= static_cast<uint16_t>(bytes[bit / 8 + 1]) << 8;
    out[j] = static_cast<uint8_t>((window >> (bit % 8)) & ((1u << m) - 1));
  }
  return out;
}

size_t packet_header_bytes(unsigned g, unsigned m) {
  return 8 + (size_t(g) * m + 7) / 8;
}

std::vector<uint8_t> serialize(const Packet& pkt, unsigned m) {
  const unsigned g = static_cast<unsigned>(pkt.coeffs.size());
  std::vector<uint8_t> out;
  out.reserve(packet_header_bytes(g, m) + pkt.payload.size());
  out.push_back(kMagic);
  out.push_back(kVersion);
  out.push_back(static_cast<uint8_t>(pkt.gen_index & 0xff));
  out.push_back(static_cast<uint8_t>(pkt.gen_index >> 8));
  out.push_back(static_cast<uint8_t>(g & 0xff));
  out.push_back(static_cast<uint8_t>(g >> 8));
  out.push_back(static_cast<uint8_t>(m));
  out.push_back(0);
  auto packed = pack_elements(pkt.coeffs, m);
  out.insert(out.end(), packed.begin(), packed.end());
  out.insert(out.end(), pkt.payload.begin(), pkt.payload.end());
  return out;
}

Packet deserialize(std::span<const uint8_t> bytes) {
  if (bytes.size() < 8) throw ParseError("packet: buffer shorter than header");
  if (bytes[0] != kMagic) throw ParseError("packet: bad magic byte");
  if (bytes[1] != kVersion)
    throw ParseError("packet: unsupported version " + std::to_string(bytes[1]));
  unsigned m = bytes[6];
  if (m != 1 && m != 4 && m != 8)
    throw ParseError("packet: bad field width " + std::to_string(m));
  unsigned g = static_cast<unsigned>(bytes[4]) |
               (static_cast<unsigned>(bytes[5]) << 8);
  if (g == 0) throw ParseError("packet: zero generation size");
  size_t header = packet_header_bytes(g, m);
  if (bytes.size() < header)
    throw ParseError("packet: buffer shorter than header");
  Packet pkt;
  pkt.gen_index = static_cast<uint16_t>(static_cast<unsigned>(bytes[2]) |
                                        (static_cast<unsigned>(bytes[3]) << 8));
  pkt.coeffs = unpack_elements(bytes.subspan(8, header - 8), g, m);
  pkt.payload.assign(bytes.begin() + static_cast<ptrdiff_t>(header),
                     bytes.end());
  return pkt;
}

}  // namespace gnc
