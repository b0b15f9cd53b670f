#include "gnc/decoder.hpp"

#include <algorithm>
#include <string>

#include "gnc/error.hpp"
#include "gnc/kernels.hpp"

namespace gnc {

CodeInstance instantiate(const CodeSpec& spec, size_t payload_bytes,
                         uint64_t graph_seed) {
  const FieldContext& ctx = FieldContext::of_q(spec.q);
  Rng master(graph_seed);
  Rng outer_rng = master.fork(0x6f75746572);  // "outer"
  Rng pre_rng = master.fork(0x707265);        // "pre"
  OuterGraph outer = OuterGraph::build(ctx, spec.mode, spec.n, spec.g,
                                       spec.K(), spec.P, outer_rng);
  PrecodeGraph pre = PrecodeGraph::build_exact(spec.K_info(), spec.K(), pre_rng);
  return CodeInstance{&ctx, spec, std::move(outer), std::move(pre),
                      payload_bytes};
}

std::vector<Payload> encode_block(const CodeInstance& inst,
                                  const std::vector<Payload>& info) {
  if (info.size() != inst.spec.K_info())
    throw ConfigError("encode_block: expected " +
                      std::to_string(inst.spec.K_info()) + " info packets");
  auto coded = inst.precode.encode(info);
  return inst.outer.encode(coded);
}

Decoder::Decoder(const CodeInstance& inst)
    : inst_(&inst), n_(inst.spec.n), g_(inst.spec.g) {
  const unsigned N = inst.spec.N();
  systems_.reserve(n_);
  for (unsigned i = 0; i < n_; ++i)
    systems_.emplace_back(*inst.ctx, g_, inst.payload_bytes);
  values_.resize(N);
  known_.assign(N, 0);
  gen_solved_.assign(n_, 0);

  const auto& sysmap = inst.outer.systematic_map();
  is_info_pos_.assign(N, 0);
  for (unsigned t = 0; t < inst.spec.K_info(); ++t) is_info_pos_[sysmap[t]] = 1;

  const auto& checks = inst.outer.checks();
  if (inst.spec.mode == OuterMode::dense_check) {
    check_residual_.resize(checks.size());
    check_consumed_.assign(checks.size(), 0);
    gen_checks_.assign(n_, {});
    for (uint32_t ci = 0; ci < checks.size(); ++ci) {
      check_residual_[ci] = static_cast<int>(checks[ci].generations.size());
      for (uint32_t gi : checks[ci].generations) gen_checks_[gi].push_back(ci);
    }
  } else {
    check_of_packet_.assign(N, -1);
    check_unknowns_.resize(checks.size());
    for (uint32_t ci = 0; ci < checks.size(); ++ci) {
      check_unknowns_[ci] = static_cast<int>(checks[ci].packets.size());
      for (uint32_t pk : checks[ci].packets)
        check_of_packet_[pk] = static_cast<int32_t>(ci);
    }
  }

  var_of_packet_.assign(N, -1);
  for (uint32_t t = 0; t < inst.spec.K(); ++t)
    var_of_packet_[sysmap[t]] = static_cast<int32_t>(t);
  const auto& pre_checks = inst.precode.checks();
  var_checks_.assign(inst.spec.K(), {});
  pre_unknowns_.resize(pre_checks.size());
  for (uint32_t ci = 0; ci < pre_checks.size(); ++ci) {
    pre_unknowns_[ci] = static_cast<int>(pre_checks[ci].size());
    for (uint32_t v : pre_checks[ci]) var_checks_[v].push_back(ci);
  }
}

bool Decoder::ingest(const Packet& pkt) {
  if (pkt.gen_index >= n_)
    throw ParseError("decoder: generation index out of range");
  if (pkt.coeffs.size() != g_)
    throw ParseError("decoder: coefficient vector length mismatch");
  if (pkt.payload.size() != inst_->payload_bytes)
    throw ParseError("decoder: payload length mismatch");
  ++received_;
  if (gen_solved_[pkt.gen_index]) return false;
  int delta = systems_[pkt.gen_index].add_equation(pkt.coeffs, pkt.payload);
  if (delta == 0) return false;
  if (systems_[pkt.gen_index].is_full_rank())
    q_full_.push_back(pkt.gen_index);
  return true;
}

void Decoder::adopt_solution(uint32_t pk, Payload&& value) {
  if (known_[pk]) return;
  known_[pk] = 1;
  values_[pk] = std::move(value);
  if (is_info_pos_[pk]) ++info_known_;
  q_known_.push_back(pk);
}

// A packet discovered outside its generation system (check or pre-code
// recovery): record it and substitute it into the system.
void Decoder::learn_packet(uint32_t pk, const Payload& value) {
  if (known_[pk]) return;
  Payload copy = value;
  adopt_solution(pk, std::move(copy));
  uint32_t gi = pk / g_;
  if (gen_solved_[gi]) return;
  auto newly = systems_[gi].substitute_known(pk % g_, values_[pk]);
  for (auto& [j, pay] : newly) adopt_solution(gi * g_ + j, std::move(pay));
  if (systems_[gi].unsolved_count() == 0) {
    gen_solved_[gi] = 1;
    ++newly_solved_gens_;
    q_solved_.push_back(gi);
  }
}

void Decoder::solve_generation(uint32_t gi) {
  if (gen_solved_[gi]) return;
  auto payloads = systems_[gi].solve_full_rank();
  gen_solved_[gi] = 1;
  ++newly_solved_gens_;
  q_solved_.push_back(gi);
  for (unsigned j = 0; j < g_; ++j)
    adopt_solution(gi * g_ + j, std::move(payloads[j]));
}

void Decoder::fire_dense_check(uint32_t ci) {
  const auto& chk = inst_->outer.checks()[ci];
  uint32_t target = n_;
  for (uint32_t gi : chk.generations)
    if (!gen_solved_[gi]) {
      target = gi;
      break;
    }
  check_consumed_[ci] = 1;
  if (target == n_) return;  // redundant: every generation already solved

  std::vector<uint8_t> coef(g_, 0);
  Payload rhs(inst_->payload_bytes, 0);
  bool any = false;
  for (const auto& e : chk.record) {
    if (e.packet / g_ == target) {
      coef[e.packet % g_] = e.coeff;
      any = true;
    } else {
      // belongs to a solved generation, hence known
      if (e.coeff == 1)
        kern::xor_row(rhs.data(), values_[e.packet].data(), rhs.size());
      else
        kern::muladd_row(rhs.data(), values_[e.packet].data(), rhs.size(),
                         inst_->ctx->mul_tables(e.coeff));
    }
  }
  if (!any) {
    for (uint8_t b : rhs)
      if (b) throw InconsistentSystem("dense check: inconsistent record");
    return;
  }
  if (systems_[target].add_equation(coef, rhs) &&
      systems_[target].is_full_rank())
    q_full_.push_back(target);
}

void Decoder::on_generation_solved(uint32_t gi) {
  if (inst_->spec.mode != OuterMode::dense_check) return;
  for (uint32_t ci : gen_checks_[gi]) {
    --check_residual_[ci];
    if (check_residual_[ci] == 1 && !check_consumed_[ci]) fire_dense_check(ci);
  }
}

void Decoder::on_known(uint32_t pk) {
  if (inst_->spec.mode == OuterMode::packet_level) {
    int32_t ci = check_of_packet_[pk];
    if (ci >= 0) {
      if (--check_unknowns_[ci] == 1) {
        const auto& chk = inst_->outer.checks()[static_cast<size_t>(ci)];
        uint32_t missing = UINT32_MAX;
        for (uint32_t p : chk.packets)
          if (!known_[p]) {
            missing = p;
            break;
          }
        if (missing != UINT32_MAX) {
          Payload acc(inst_->payload_bytes, 0);
          for (uint32_t p : chk.packets) {
            if (p == missing) continue;
            kern::xor_row(acc.data(), values_[p].data(), acc.size());
          }
          learn_packet(missing, acc);
        }
      }
    }
  }
  int32_t v = var_of_packet_[pk];
  if (v < 0) return;
  const auto& sysmap = inst_->outer.systematic_map();
  const auto& pre_checks = inst_->precode.checks();
  for (uint32_t ci : var_checks_[static_cast<size_t>(v)]) {
    if (--pre_unknowns_[ci] == 1) {
      uint32_t missing = UINT32_MAX;
      for (uint32_t w : pre_checks[ci])
        if (!known_[sysmap[w]]) {
          missing = sysmap[w];
          break;
        }
      if (missing == UINT32_MAX) continue;
      Payload acc(inst_->payload_bytes, 0);
      for (uint32_t w : pre_checks[ci]) {
        uint32_t p = sysmap[w];
        if (p == missing) continue;
        kern::xor_row(acc.data(), values_[p].data(), acc.size());
      }
      learn_packet(missing, acc);
    }
  }
}

unsigned Decoder::iterate() {
  ++iterations_;
  newly_solved_gens_ = 0;
  while (!q_full_.empty() || !q_solved_.empty() || !q_known_.empty()) {
    if (!q_full_.empty()) {
      uint32_t gi = q_full_.back();
      q_full_.pop_back();
      if (!gen_solved_[gi] && systems_[gi].is_full_rank())
        solve_generation(gi);
      continue;
    }
    if (!q_solved_.empty()) {
      uint32_t gi = q_solved_.back();
      q_solved_.pop_back();
      on_generation_solved(gi);
      continue;
    }
    uint32_t pk = q_known_.back();
    q_known_.pop_back();
    on_known(pk);
  }
  return newly_solved_gens_;
}

unsigned Decoder::solved_generations() const {
  unsigned c = 0;
  for (uint8_t s : gen_solved_) c += s;
  return c;
}

std::vector<unsigned> Decoder::rank_profile() const {
  std::vector<unsigned> out(n_);
  for (unsigned i = 0; i < n_; ++i)
    out[i] = gen_solved_[i] ? g_ : systems_[i].rank() + systems_[i].solved_count();
  return out;
}

std::vector<Payload> Decoder::info_payloads() const {
  if (!is_complete()) throw Error("decoder: not complete");
  const auto& sysmap = inst_->outer.systematic_map();
  std::vector<Payload> out;
  out.reserve(inst_->spec.K_info());
  for (unsigned t = 0; t < inst_->spec.K_info(); ++t)
    out.push_back(values_[sysmap[t]]);
  return out;
}

DecodeResult run_until_success(Decoder& dec,
                               const std::function<Packet()>& source,
                               uint64_t cap_packets) {
  DecodeResult res;
  while (!dec.is_complete()) {
    if (dec.received_count() >= cap_packets) {
      res.n_r = dec.received_count();
      res.success = false;
      res.iterations = dec.iterations();
      return res;
    }
    Packet pkt = source();
    if (dec.ingest(pkt)) dec.iterate();
  }
  res.n_r = dec.received_count();
  res.success = true;
  res.iterations = dec.iterations();
  return res;
}

}  // namespace gnc
