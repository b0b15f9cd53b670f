#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gnc/codespec.hpp"
#include "gnc/linsys.hpp"
#include "gnc/outer.hpp"
#include "gnc/packet.hpp"
#include "gnc/precode.hpp"

namespace gnc {

// One concrete code: spec plus the graphs reconstructed from a seed. Sender
// and receiver build identical instances from (spec, seed).
struct CodeInstance {
  const FieldContext* ctx;
  CodeSpec spec;
  OuterGraph outer;
  PrecodeGraph precode;
  size_t payload_bytes;
};

CodeInstance instantiate(const CodeSpec& spec, size_t payload_bytes,
                         uint64_t graph_seed);
inline CodeInstance instantiate(const CodeSpec& spec, size_t payload_bytes) {
  return instantiate(spec, payload_bytes, spec.seed);
}

// Pre-code then outer code; returns the N outer-coded payloads.
std::vector<Payload> encode_block(const CodeInstance& inst,
                                  const std::vector<Payload>& info);

// Joint iterative decoder: per-generation elimination, edge deletion on the
// outer checks, packet-level check recovery, and pre-code peeling, run to a
// fixpoint after every innovative packet.
class Decoder {
 public:
  explicit Decoder(const CodeInstance& inst);

  // Adds the packet's equation; true iff the generation's rank grew.
  bool ingest(const Packet& pkt);
  // Propagates to a fixpoint; returns generations solved by this call.
  unsigned iterate();

  bool is_complete() const { return info_known_ == inst_->spec.K_info(); }
  uint64_t received_count() const { return received_; }
  unsigned iterations() const { return iterations_; }
  unsigned solved_generations() const;
  std::vector<unsigned> rank_profile() const;

  // The K' recovered info payloads; throws unless is_complete().
  std::vector<Payload> info_payloads() const;

 private:
  void learn_packet(uint32_t pk, const Payload& value);
  void adopt_solution(uint32_t pk, Payload&& value);
  void solve_generation(uint32_t gi);
  void on_known(uint32_t pk);
  void on_generation_solved(uint32_t gi);
  void fire_dense_check(uint32_t ci);

  const CodeInstance* inst_;
  unsigned n_, g_;
  uint64_t received_ = 0;
  unsigned iterations_ = 0;
  unsigned newly_solved_gens_ = 0;

  std::vector<GenerationSystem> systems_;
  std::vector<Payload> values_;
  std::vector<uint8_t> known_;
  std::vector<uint8_t> gen_solved_;
  unsigned info_known_ = 0;
  std::vector<uint8_t> is_info_pos_;  // outer position holds one of the K' info packets

  // dense mode
  std::vector<int> check_residual_;  // unsolved generations per check
  std::vector<uint8_t> check_consumed_;
  std::vector<std::vector<uint32_t>> gen_checks_;
  // packet-level mode
  std::vector<int32_t> check_of_packet_;
  std::vector<int> check_unknowns_;
  // pre-code
  std::vector<int32_t> var_of_packet_;  // outer position -> pre-code variable
  std::vector<std::vector<uint32_t>> var_checks_;
  std::vector<int> pre_unknowns_;

  std::vector<uint32_t> q_known_;
  std::vector<uint32_t> q_solved_;
  std::vector<uint32_t> q_full_;
};

struct DecodeResult {
  uint64_t n_r = 0;
  double overhead = 0;
  bool success = false;
  unsigned iterations = 0;
};

// Alternates ingest/iterate until complete or the safety cap is passed.
DecodeResult run_until_success(Decoder& dec,
                               const std::function<Packet()>& source,
                               uint64_t cap_packets);

}  // namespace gnc
