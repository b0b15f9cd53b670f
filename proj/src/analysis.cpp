#include "gnc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "gnc/error.hpp"

namespace gnc {

namespace {

// log-sum-exp over term logs; keeps the tail sums stable for large g and x.
double log_sum_exp(const std::vector<double>& logs) {
  double m = -HUGE_VAL;
  for (double v : logs) m = std::max(m, v);
  if (m == -HUGE_VAL) return m;
  double s = 0;
  for (double v : logs) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

double gamma_reg(unsigned g, double x) {
  if (g == 0) throw ConfigError("gamma_reg: g must be positive");
  if (x <= 0) return 1.0;
  const double lx = std::log(x);
  std::vector<double> logs(g);
  for (unsigned i = 0; i < g; ++i)
    logs[i] = -x + double(i) * lx - std::lgamma(double(i) + 1.0);
  double v = std::exp(log_sum_exp(logs));
  return std::min(v, 1.0);
}

double gamma_reg_inv(unsigned g, double y) {
  if (!(y > 0.0) || y > 1.0)
    throw ConfigError("gamma_reg_inv: y must lie in (0,1]");
  if (y == 1.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (gamma_reg(g, hi) > y) {
    lo = hi;
    hi *= 2;
    if (hi > 1e9) throw Error("gamma_reg_inv: bracket failure");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double v = gamma_reg(g, mid);
    if (std::abs(v - y) < 1e-12) return mid;
    if (v > y)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * (1.0 + mid)) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> rank_pmf_poisson(double r, unsigned g) {
  if (r < 0) throw ConfigError("rank_pmf_poisson: r must be nonnegative");
  std::vector<double> pmf(g + 1, 0.0);
  if (r == 0) {
    pmf[0] = 1.0;
    return pmf;
  }
  const double lr = std::log(r);
  double head = 0;
  for (unsigned i = 0; i < g; ++i) {
    pmf[i] = std::exp(-r + double(i) * lr - std::lgamma(double(i) + 1.0));
    head += pmf[i];
  }
  pmf[g] = std::max(0.0, 1.0 - head);
  return pmf;
}

std::vector<double> rank_pmf_binomial(double r, unsigned n, unsigned g) {
  if (n == 0) throw ConfigError("rank_pmf_binomial: n must be positive");
  double rn_real = r * double(n);
  auto rn = static_cast<long long>(std::llround(rn_real));
  if (rn < 0 || std::abs(rn_real - double(rn)) > 1e-6)
    throw ConfigError("rank_pmf_binomial: r*n must be a nonnegative integer");
  std::vector<double> pmf(g + 1, 0.0);
  if (rn == 0) {
    pmf[0] = 1.0;
    return pmf;
  }
  const double lp = -std::log(double(n));                    // log(1/n)
  const double lq = std::log1p(-1.0 / double(n));            // log((n-1)/n)
  double head = 0;
  for (unsigned i = 0; i < g; ++i) {
    if (static_cast<long long>(i) > rn) break;
    double lc = std::lgamma(double(rn) + 1.0) - std::lgamma(double(i) + 1.0) -
                std::lgamma(double(rn - i) + 1.0);
    if (n == 1) {
      pmf[i] = (static_cast<long long>(i) == rn) ? 1.0 : 0.0;
    } else {
      pmf[i] = std::exp(lc + double(i) * lp + double(rn - i) * lq);
    }
    head += pmf[i];
  }
  pmf[g] = std::max(0.0, 1.0 - head);
  return pmf;
}

std::vector<double> expected_rank_counts(double r, unsigned n, unsigned g) {
  auto pmf = rank_pmf_binomial(r, n, g);
  for (auto& v : pmf) v *= double(n);
  return pmf;
}

DensityEvolution::DensityEvolution(DEParams params)
    : params_(std::move(params)) {
  if (params_.g == 0) throw ConfigError("DEParams: g must be positive");
  if (!(params_.R > 0) || params_.R >= 1.0)
    throw ConfigError("DEParams: R must lie in (0,1)");
  if (!(params_.x0 > 0) || params_.x0 >= 1.0)
    throw ConfigError("DEParams: x0 must lie in (0,1)");
  if (params_.delta < 0 || params_.x0 >= 1.0 - params_.delta)
    throw ConfigError("DEParams: need 0 < x0 < 1-delta <= 1");
  if (params_.robust) {
    double omd0 = 1.0 - params_.robust->delta0;
    if (!(params_.robust->Delta > 0) || params_.x0 >= omd0)
      throw ConfigError("DEParams: robust needs Delta > 0 and x0 < 1-delta0");
  }
  r0_ = gamma_reg_inv(params_.g, 1.0 - params_.x0);
}

double DensityEvolution::step(double x_prev) const {
  double arg = r0_ + double(params_.g) * (1.0 - params_.R) *
                         params_.P.derivative(x_prev);
  return 1.0 - gamma_reg(params_.g, arg);
}

DETrajectory DensityEvolution::trajectory(unsigned max_iters,
                                          double tol) const {
  DETrajectory out;
  out.r0 = r0_;
  double target = 1.0 - params_.delta;
  double x = params_.x0;
  out.xs.push_back(x);
  for (unsigned i = 0; i < max_iters; ++i) {
    double nx = step(x);
    out.xs.push_back(nx);
    if (nx >= target) {
      out.converged = true;
      break;
    }
    if (nx - x < tol) break;  // stalled at a fixpoint below the target
    x = nx;
  }
  out.closing_point = out.converged ? target : out.xs.back();
  out.epsilon = r0_ / (double(params_.g) * target * params_.R) - 1.0;
  return out;
}

ConvergenceReport DensityEvolution::check_convergence(
    unsigned grid_points, double dip_tolerance) const {
  if (grid_points < 2) throw ConfigError("check_convergence: grid too small");
  const double x0 = params_.x0;
  const double hi = 1.0 - params_.delta - 1e-12;
  const double omd0 =
      params_.robust ? 1.0 - params_.robust->delta0 : HUGE_VAL;
  const double margin_req = params_.robust ? params_.robust->Delta : 0.0;

  ConvergenceReport rep;
  rep.ok = true;
  rep.closing_point = 1.0 - params_.delta;
  rep.min_margin = HUGE_VAL;
  rep.min_margin_upper = HUGE_VAL;

  auto f = [&](double x) { return step(x) - x; };

  double prev_x = x0;
  bool crossed = false;
  for (unsigned i = 1; i <= grid_points; ++i) {
    double x = x0 + (hi - x0) * double(i) / double(grid_points + 1);
    double fx = f(x);
    rep.min_margin = std::min(rep.min_margin, fx);
    bool upper = x > omd0;
    if (upper) rep.min_margin_upper = std::min(rep.min_margin_upper, fx - margin_req);
    double threshold = upper ? margin_req : 0.0;
    if (fx <= threshold - dip_tolerance) {
      // refine the crossing by bisection
      double lo = prev_x, hb = x;
      for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hb);
        double t = (mid > omd0 ? margin_req : 0.0) - dip_tolerance;
        if (f(mid) > t)
          lo = mid;
        else
          hb = mid;
        if (hb - lo < 1e-10) break;
      }
      rep.closing_point = 0.5 * (lo + hb);
      rep.ok = false;
      crossed = true;
      break;
    }
    prev_x = x;
  }
  if (rep.min_margin == HUGE_VAL) rep.min_margin = 0;
  if (rep.min_margin_upper == HUGE_VAL) rep.min_margin_upper = 0;
  (void)crossed;
  return rep;
}

double DensityEvolution::overhead_dense() const {
  return r0_ / (double(params_.g) * (1.0 - params_.delta) * params_.R) - 1.0;
}

std::pair<double, double> DensityEvolution::overhead_improved() const {
  const double one_minus_delta = 1.0 - params_.delta;
  if (params_.P.mean() >= 1.0 / (1.0 - params_.R))
    throw ConfigError("overhead_improved: mean degree must be < 1/(1-R)");
  double rp = one_minus_delta + params_.delta * (1.0 - params_.R) *
                                    params_.P.derivative(one_minus_delta);
  double eps = r0_ / (double(params_.g) * params_.R * rp) - 1.0;
  return {rp, eps};
}

double de_step(const DEParams& params, double x_prev) {
  return DensityEvolution(params).step(x_prev);
}

ConvergenceReport check_convergence(const DEParams& params,
                                    unsigned grid_points,
                                    double dip_tolerance) {
  return DensityEvolution(params).check_convergence(grid_points, dip_tolerance);
}

double overhead_dense(const DEParams& params) {
  return DensityEvolution(params).overhead_dense();
}

std::pair<double, double> overhead_improved(const DEParams& params) {
  return DensityEvolution(params).overhead_improved();
}

double margin_profile(const DEParams& params, unsigned grid_points) {
  return DensityEvolution(params).check_convergence(grid_points).min_margin;
}

DegreeDistribution heuristic_px(unsigned d_star) {
  if (d_star < 2) throw ConfigError("heuristic_px: D* must be at least 2");
  std::map<unsigned, double> p;
  for (unsigned i = 2; i <= d_star; ++i)
    p[i] = 1.0 / (double(i) * double(i - 1));
  p[d_star + 1] = 1.0 / double(d_star);
  return DegreeDistribution(p);
}

void write_evolution_chart(std::ostream& os, const DensityEvolution& de,
                           unsigned grid_points, double x_lo, double x_hi) {
  os << "x,f_x,diag\n";
  for (unsigned i = 0; i < grid_points; ++i) {
    double x =
        x_lo + (x_hi - x_lo) * double(i) / double(grid_points - 1);
    os << x << ',' << de.map(x) << ',' << x << '\n';
  }
}

}  // namespace gnc
