#pragma once

#include <cstdint>
#include <vector>

#include "gnc/analysis.hpp"
#include "gnc/codespec.hpp"
#include "gnc/degree.hpp"

namespace gnc {

struct OptMode {
  enum Kind { dense, packet_level, robust } kind = dense;
  double delta0 = 0;  // robust: margin region starts at 1-delta0
  double Delta = 0;   // robust: required margin
};

struct GridSpec {
  double x0_lo = 0.01, x0_hi = 0.30, x0_step = 0.001;
  double R_lo = 0.50, R_hi = 0.95, R_step = 0.002;
  unsigned x_points = 10000;  // f(x) sampling between 0 and 1
};

struct InnerResult {
  bool feasible = false;
  double x0 = 0, R = 0, delta = 0, closing = 0;
  double epsilon = 0;
  double r_prime = 0;  // packet-level only
};

// Precomputed gamma_reg_inv grid; f(x) > t iff r0 + g(1-R)P'(x) > h(x+t).
struct DEGrid {
  unsigned g = 0;
  std::vector<double> x;
  std::vector<double> h;        // gamma_reg_inv(g, 1-x)
  std::vector<double> h_delta;  // robust: gamma_reg_inv(g, 1-x-Delta)
};
DEGrid make_de_grid(unsigned g, unsigned points, double robust_delta = 0);

// Grid search over (x0, R): delta from the chart's closing point, epsilon
// from the mode's overhead formula; returns the grid minimum.
InnerResult inner_search(const DegreeDistribution& P, unsigned g,
                         const OptMode& mode, const GridSpec& grid);
InnerResult inner_search(const DegreeDistribution& P, const DEGrid& de,
                         const OptMode& mode, const GridSpec& grid);

struct OptimizeConfig {
  unsigned g = 25;
  unsigned D = 10;
  OptMode mode;
  GridSpec grid;
  unsigned multistarts = 32;
  uint64_t seed = 0;
  unsigned max_iters = 60;
  double fd_step = 1e-4;
  unsigned threads = 1;
  unsigned coarse_factor = 4;  // grid decimation during descent
};

struct OptimizeResult {
  DegreeDistribution P;
  InnerResult best;
  unsigned g = 0;
  OptMode mode;
  double baseline_epsilon = 0;  // all-degree-2 distribution, same mode
  unsigned starts_used = 0;
  CodeSpec to_spec(unsigned n, unsigned q, uint64_t seed) const;
};

// Multistart projected gradient descent over the simplex (p_2..p_D) with
// finite-difference gradients of epsilon*(P); every returned optimum is
// re-verified with check_convergence.
OptimizeResult optimize_distribution(const OptimizeConfig& config);

// Euclidean projection onto the probability simplex.
void project_simplex(std::vector<double>& v);

}  // namespace gnc
