#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gnc/gf.hpp"

namespace gnc {

// Per-generation linear system with incremental rank tracking.
//
// Stored rows are kept in reduced row echelon form restricted to the unsolved
// columns: every pivot column has a single nonzero entry (1) across rows, and
// solved packets are eliminated from all rows as soon as they become known.
class GenerationSystem {
 public:
  GenerationSystem(const FieldContext& ctx, unsigned g, size_t payload_bytes);

  // Adds one equation sum_j coeffs[j]*u_j = payload. Returns 1 iff the rank
  // grew. Throws InconsistentSystem on a zero row with nonzero payload.
  int add_equation(std::span<const uint8_t> coeffs,
                   std::span<const uint8_t> payload);

  // Marks packet `idx` as externally known and eliminates its column. If the
  // remaining unknowns become solvable, solves them and returns them.
  std::vector<std::pair<unsigned, Payload>> substitute_known(
      unsigned idx, std::span<const uint8_t> payload);

  // All g payloads, in packet order. Requires rank + solved == g.
  std::vector<Payload> solve_full_rank();

  unsigned g() const { return g_; }
  size_t payload_bytes() const { return pay_bytes_; }
  unsigned rank() const { return static_cast<unsigned>(rows_.size()); }
  unsigned solved_count() const { return solved_count_; }
  unsigned unsolved_count() const { return g_ - solved_count_; }
  bool is_full_rank() const { return rank() == unsolved_count(); }
  bool is_solved(unsigned idx) const { return solved_flag_[idx] != 0; }
  const FieldContext& field() const { return *ctx_; }

 private:
  struct Row {
    std::vector<uint8_t> coef;  // g field elements, one per byte
    Payload pay;
  };

  void row_muladd(Row& dst, const Row& src, uint8_t c);
  void normalize(Row& r, unsigned lead);
  // Moves every pivot row's value into the solved store; returns (col, value).
  std::vector<std::pair<unsigned, Payload>> finalize_full_rank();

  const FieldContext* ctx_;
  unsigned g_;
  size_t pay_bytes_;
  std::vector<Row> rows_;
  std::vector<int> pivot_row_of_col_;  // -1 when the column has no pivot
  std::vector<uint8_t> solved_flag_;
  std::vector<Payload> solved_pay_;
  unsigned solved_count_ = 0;
};

// Straightforward full-elimination rank, independent of GenerationSystem.
// Matrix rows are vectors of field elements (one per byte).
unsigned rank_oracle(const FieldContext& ctx,
                     const std::vector<std::vector<uint8_t>>& matrix);

}  // namespace gnc
