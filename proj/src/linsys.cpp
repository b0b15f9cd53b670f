#include "gnc/linsys.hpp"

#include <algorithm>
#include <cstring>

namespace gnc {

namespace {
bool all_zero(std::span<const uint8_t> v) {
  for (uint8_t b : v)
    if (b) return false;
  return true;
}
}  // namespace

GenerationSystem::GenerationSystem(const FieldContext& ctx, unsigned g,
                                   size_t payload_bytes)
    : ctx_(&ctx),
      g_(g),
      pay_bytes_(payload_bytes),
      pivot_row_of_col_(g, -1),
      solved_flag_(g, 0),
      solved_pay_(g) {
  if (g == 0) throw ConfigError("GenerationSystem: g must be positive");
}

void GenerationSystem::row_muladd(Row& dst, const Row& src, uint8_t c) {
  if (c == 0) return;
  if (c == 1) {
    kern::xor_row(dst.coef.data(), src.coef.data(), g_);
    if (pay_bytes_) kern::xor_row(dst.pay.data(), src.pay.data(), pay_bytes_);
    return;
  }
  auto t = ctx_->mul_tables(c);
  kern::muladd_row(dst.coef.data(), src.coef.data(), g_, t);
  if (pay_bytes_) kern::muladd_row(dst.pay.data(), src.pay.data(), pay_bytes_, t);
}

void GenerationSystem::normalize(Row& r, unsigned lead) {
  uint8_t iv = ctx_->inv(r.coef[lead]);
  if (iv == 1) return;
  auto t = ctx_->mul_tables(iv);
  kern::scale_row(r.coef.data(), g_, t);
  if (pay_bytes_) kern::scale_row(r.pay.data(), pay_bytes_, t);
}

int GenerationSystem::add_equation(std::span<const uint8_t> coeffs,
                                   std::span<const uint8_t> payload) {
  if (coeffs.size() != g_ || payload.size() != pay_bytes_)
    throw ConfigError("add_equation: bad dimensions");

  Row row;
  row.coef.assign(coeffs.begin(), coeffs.end());
  row.pay.assign(payload.begin(), payload.end());

  // Move known packets' contribution to the payload side.
  for (unsigned j = 0; j < g_; ++j) {
    uint8_t c = row.coef[j];
    if (c && solved_flag_[j]) {
      if (pay_bytes_) {
        if (c == 1)
          kern::xor_row(row.pay.data(), solved_pay_[j].data(), pay_bytes_);
        else
          kern::muladd_row(row.pay.data(), solved_pay_[j].data(), pay_bytes_,
                           ctx_->mul_tables(c));
      }
      row.coef[j] = 0;
    }
  }

  // Reduce against existing pivots in ascending column order.
  for (unsigned j = 0; j < g_; ++j) {
    uint8_t c = row.coef[j];
    if (c == 0) continue;
    int pr = pivot_row_of_col_[j];
    if (pr >= 0) row_muladd(row, rows_[static_cast<size_t>(pr)], c);
  }

  unsigned lead = g_;
  for (unsigned j = 0; j < g_; ++j)
    if (row.coef[j]) {
      lead = j;
      break;
    }
  if (lead == g_) {
    if (!all_zero(row.pay))
      throw InconsistentSystem("add_equation: inconsistent system");
    return 0;
  }

  normalize(row, lead);
  for (auto& r : rows_) {
    uint8_t c = r.coef[lead];
    if (c) row_muladd(r, row, c);
  }
  rows_.push_back(std::move(row));
  pivot_row_of_col_[lead] = static_cast<int>(rows_.size()) - 1;
  return 1;
}

std::vector<std::pair<unsigned, Payload>> GenerationSystem::substitute_known(
    unsigned idx, std::span<const uint8_t> payload) {
  if (idx >= g_) throw ConfigError("substitute_known: index out of range");
  if (solved_flag_[idx])
    throw Error("substitute_known: packet already solved");
  if (payload.size() != pay_bytes_)
    throw ConfigError("substitute_known: bad payload size");

  for (auto& r : rows_) {
    uint8_t c = r.coef[idx];
    if (c == 0) continue;
    if (pay_bytes_) {
      if (c == 1)
        kern::xor_row(r.pay.data(), payload.data(), pay_bytes_);
      else
        kern::muladd_row(r.pay.data(), payload.data(), pay_bytes_,
                         ctx_->mul_tables(c));
    }
    r.coef[idx] = 0;
  }
  solved_flag_[idx] = 1;
  solved_pay_[idx].assign(payload.begin(), payload.end());
  ++solved_count_;

  int pi = pivot_row_of_col_[idx];
  if (pi >= 0) {
    pivot_row_of_col_[idx] = -1;
    Row& row = rows_[static_cast<size_t>(pi)];
    unsigned lead = g_;
    for (unsigned j = 0; j < g_; ++j)
      if (row.coef[j]) {
        lead = j;
        break;
      }
    if (lead == g_) {
      if (!all_zero(row.pay))
        throw InconsistentSystem("substitute_known: inconsistent system");
      rows_.erase(rows_.begin() + pi);
      for (auto& p : pivot_row_of_col_)
        if (p > pi) --p;
    } else {
      // The row repivots on a previously free column.
      normalize(row, lead);
      for (int rj = 0; rj < static_cast<int>(rows_.size()); ++rj) {
        if (rj == pi) continue;
        uint8_t c = rows_[static_cast<size_t>(rj)].coef[lead];
        if (c) row_muladd(rows_[static_cast<size_t>(rj)], row, c);
      }
      pivot_row_of_col_[lead] = pi;
    }
  }

  if (is_full_rank() && unsolved_count() > 0) return finalize_full_rank();
  return {};
}

std::vector<std::pair<unsigned, Payload>>
GenerationSystem::finalize_full_rank() {
  std::vector<std::pair<unsigned, Payload>> out;
  out.reserve(rows_.size());
  for (unsigned j = 0; j < g_; ++j) {
    int pr = pivot_row_of_col_[j];
    if (pr < 0) continue;
    Row& row = rows_[static_cast<size_t>(pr)];
    out.emplace_back(j, std::move(row.pay));
  }
  for (auto& [j, pay] : out) {
    solved_flag_[j] = 1;
    solved_pay_[j] = pay;
    ++solved_count_;
    pivot_row_of_col_[j] = -1;
  }
  rows_.clear();
  return out;
}

std::vector<Payload> GenerationSystem::solve_full_rank() {
  if (!is_full_rank()) throw Error("solve_full_rank: not full rank");
  if (unsolved_count() > 0) finalize_full_rank();
  std::vector<Payload> out;
  out.reserve(g_);
  for (unsigned j = 0; j < g_; ++j) out.push_back(solved_pay_[j]);
  return out;
}

unsigned rank_oracle(const FieldContext& ctx,
                     const std::vector<std::vector<uint8_t>>& matrix) {
  if (matrix.empty()) return 0;
  std::vector<std::vector<uint8_t>> a = matrix;
  const size_t rows = a.size();
  const size_t cols = a[0].size();
  unsigned rank = 0;
  size_t row = 0;
  for (size_t col = 0; col < cols && row < rows; ++col) {
    size_t sel = row;
    while (sel < rows && a[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(a[sel], a[row]);
    uint8_t iv = ctx.inv(a[row][col]);
    if (iv != 1)
      for (size_t j = col; j < cols; ++j) a[row][j] = ctx.mul(iv, a[row][j]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == row) continue;
      uint8_t c = a[i][col];
      if (c == 0) continue;
      for (size_t j = col; j < cols; ++j)
        a[i][j] ^= ctx.mul(c, a[row][j]);
    }
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace gnc
