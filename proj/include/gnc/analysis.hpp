#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "gnc/degree.hpp"

namespace gnc {

struct RobustParams {
  double delta0 = 0;  // margin region starts at 1-delta0
  double Delta = 0;   // required margin there
};

// Inputs of the density-evolution recursion
//   x_i = 1 - gamma_reg(g, r0 + g(1-R) P'(x_{i-1})),  r0 = gamma_reg_inv(g, 1-x0).
struct DEParams {
  unsigned g = 0;
  double R = 0;
  DegreeDistribution P;
  double x0 = 0;
  double delta = 0;  // design residual; closing target is 1-delta
  std::optional<RobustParams> robust;
};

// Regularized incomplete gamma Q(g,x) = e^{-x} sum_{i<g} x^i/i!
//   = Pr[Poisson(x) <= g-1]. Strictly decreasing in x; Q(g,0) = 1.
double gamma_reg(unsigned g, double x);
// Unique x with gamma_reg(g,x) = y, y in (0,1]. Bisection to 1e-12.
double gamma_reg_inv(unsigned g, double y);

// Truncated rank laws. Both return a pmf over {0..g}.
std::vector<double> rank_pmf_poisson(double r, unsigned g);
std::vector<double> rank_pmf_binomial(double r, unsigned n, unsigned g);
std::vector<double> expected_rank_counts(double r, unsigned n, unsigned g);

struct ConvergenceReport {
  bool ok = false;
  double closing_point = 0;     // first x > x0 with margin <= 0 (or 1-delta)
  double min_margin = 0;        // min of f(x) = map(x) - x over the interval
  double min_margin_upper = 0;  // robust only: min of f - Delta on the upper region
};

struct DETrajectory {
  double r0 = 0;
  std::vector<double> xs;
  bool converged = false;
  double closing_point = 0;
  double epsilon = 0;
};

class DensityEvolution {
 public:
  explicit DensityEvolution(DEParams params);

  const DEParams& params() const { return params_; }
  double r0() const { return r0_; }

  // One application of the DE map.
  double step(double x_prev) const;
  double map(double x) const { return step(x); }

  // Iterates the map from x0; converged when it passes 1-delta.
  DETrajectory trajectory(unsigned max_iters = 10000, double tol = 1e-12) const;

  // Grid sweep of f(x) = map(x) - x over (x0, 1-delta). `dip_tolerance`
  // ignores dips no deeper than the given value; reference designs quoted
  // to a few decimals can dip a hair below zero.
  ConvergenceReport check_convergence(unsigned grid_points = 10000,
                                      double dip_tolerance = 0) const;

  // epsilon = r0 / (g (1-delta) R) - 1
  double overhead_dense() const;
  // packet-level: returns (R', epsilon) with
  //   R' = 1-delta + delta (1-R) P'(1-delta),
  //   epsilon = r0 / (g R R') - 1.
  std::pair<double, double> overhead_improved() const;

 private:
  DEParams params_;
  double r0_;
};

// Convenience wrappers over DensityEvolution.
double de_step(const DEParams& params, double x_prev);
ConvergenceReport check_convergence(const DEParams& params,
                                    unsigned grid_points = 10000,
                                    double dip_tolerance = 0);
double overhead_dense(const DEParams& params);
std::pair<double, double> overhead_improved(const DEParams& params);
double margin_profile(const DEParams& params, unsigned grid_points = 10000);

// P(x) = sum_{i=2..D*} x^i/(i(i-1)) + x^(D*+1)/D*; telescopes to sum 1.
DegreeDistribution heuristic_px(unsigned d_star);

// CSV rows `x,f_x,diag`: the DE map and the 45-degree line.
void write_evolution_chart(std::ostream& os, const DensityEvolution& de,
                           unsigned grid_points, double x_lo = 0.0,
                           double x_hi = 1.0);

}  // namespace gnc
