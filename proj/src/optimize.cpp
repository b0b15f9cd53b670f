#include "gnc/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <thread>

#include "gnc/error.hpp"
#include "gnc/rng.hpp"

namespace gnc {

namespace {
constexpr double kInfeasible = std::numeric_limits<double>::infinity();

DegreeDistribution vector_to_distribution(const std::vector<double>& p) {
  std::map<unsigned, double> probs;
  double sum = 0;
  for (size_t k = 0; k < p.size(); ++k) {
    if (p[k] > 1e-12) {
      probs[static_cast<unsigned>(k + 2)] = p[k];
      sum += p[k];
    }
  }
  if (probs.empty() || sum <= 0)
    throw ConfigError("optimize: degenerate distribution");
  for (auto& [d, v] : probs) v /= sum;
  return DegreeDistribution(probs);
}
}  // namespace

DEGrid make_de_grid(unsigned g, unsigned points, double robust_delta) {
  DEGrid grid;
  grid.g = g;
  grid.x.resize(points);
  grid.h.resize(points);
  for (unsigned i = 0; i < points; ++i) {
    double x = double(i + 1) / double(points + 1);
    grid.x[i] = x;
    grid.h[i] = gamma_reg_inv(g, 1.0 - x);
  }
  if (robust_delta > 0) {
    grid.h_delta.resize(points);
    for (unsigned i = 0; i < points; ++i) {
      double y = 1.0 - grid.x[i] - robust_delta;
      grid.h_delta[i] = y > 0 ? gamma_reg_inv(g, y) : HUGE_VAL;
    }
  }
  return grid;
}

InnerResult inner_search(const DegreeDistribution& P, unsigned g,
                         const OptMode& mode, const GridSpec& grid) {
  DEGrid de = make_de_grid(g, grid.x_points,
                           mode.kind == OptMode::robust ? mode.Delta : 0.0);
  return inner_search(P, de, mode, grid);
}

InnerResult inner_search(const DegreeDistribution& P, const DEGrid& de,
                         const OptMode& mode, const GridSpec& grid) {
  const unsigned g = de.g;
  const size_t nx = de.x.size();
  std::vector<double> pp(nx);
  for (size_t i = 0; i < nx; ++i) pp[i] = P.derivative(de.x[i]);
  const double dbar = P.mean();

  InnerResult best;
  best.epsilon = kInfeasible;

  const double omd0 = mode.kind == OptMode::robust ? 1.0 - mode.delta0 : 2.0;

  for (double x0 = grid.x0_lo; x0 <= grid.x0_hi + 1e-12; x0 += grid.x0_step) {
    const double r0 = gamma_reg_inv(g, 1.0 - x0);
    size_t i0 = static_cast<size_t>(
        std::upper_bound(de.x.begin(), de.x.end(), x0) - de.x.begin());
    if (i0 >= nx) continue;
    for (double R = grid.R_lo; R <= grid.R_hi + 1e-12; R += grid.R_step) {
      if (mode.kind == OptMode::packet_level && dbar >= 1.0 / (1.0 - R))
        continue;
      const double a = double(g) * (1.0 - R);
      size_t i = i0;
      bool violated_lower = false;
      for (; i < nx; ++i) {
        bool upper = de.x[i] > omd0;
        double thresh = upper ? de.h_delta[i] : de.h[i];
        if (r0 + a * pp[i] <= thresh) {
          violated_lower = !upper && mode.kind == OptMode::robust;
          break;
        }
      }
      if (i == i0) continue;  // closed immediately: infeasible
      if (violated_lower) continue;  // robust: must stay open through 1-delta0
      double closing = (i < nx) ? de.x[i] : de.x[nx - 1];
      double delta = 1.0 - closing;
      double eps, rp = 0;
      if (mode.kind == OptMode::packet_level) {
        rp = closing + delta * (1.0 - R) * P.derivative(closing);
        eps = r0 / (double(g) * R * rp) - 1.0;
      } else {
        eps = r0 / (double(g) * closing * R) - 1.0;
      }
      if (eps < best.epsilon) {
        best.feasible = true;
        best.x0 = x0;
        best.R = R;
        best.delta = delta;
        best.closing = closing;
        best.epsilon = eps;
        best.r_prime = rp;
      }
    }
  }
  if (!best.feasible) return best;

  // Refine the winning closing point by bisection on the exact margin.
  DEParams params{g, best.R, P, best.x0, 0.0,
                  mode.kind == OptMode::robust
                      ? std::optional<RobustParams>{{mode.delta0, mode.Delta}}
                      : std::nullopt};
  DensityEvolution dev(params);
  auto margin = [&](double x) {
    double t = (mode.kind == OptMode::robust && x > omd0) ? mode.Delta : 0.0;
    return dev.map(x) - x - t;
  };
  const double grid_step = 1.0 / double(grid.x_points + 1);
  double lo = best.closing - grid_step;
  double hi = best.closing;
  while (margin(hi) > 0 && hi < 1.0 - 1e-9) {
    lo = hi;
    hi = std::min(1.0 - 1e-9, hi + grid_step);
  }
  if (margin(hi) <= 0) {
    for (int it = 0; it < 100 && hi - lo > 1e-10; ++it) {
      double mid = 0.5 * (lo + hi);
      if (margin(mid) > 0)
        lo = mid;
      else
        hi = mid;
    }
  } else {
    lo = hi;  // open all the way to the search limit
  }
  best.closing = lo;
  best.delta = 1.0 - best.closing;
  double r0 = dev.r0();
  if (mode.kind == OptMode::packet_level) {
    best.r_prime =
        best.closing + best.delta * (1.0 - best.R) * P.derivative(best.closing);
    best.epsilon = r0 / (double(g) * best.R * best.r_prime) - 1.0;
  } else {
    best.epsilon = r0 / (double(g) * best.closing * best.R) - 1.0;
  }
  return best;
}

void project_simplex(std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0, theta = 0;
  size_t rho = 0;
  for (size_t i = 0; i < n; ++i) {
    css += u[i];
    double t = (css - 1.0) / double(i + 1);
    if (u[i] - t > 0) {
      rho = i + 1;
      theta = t;
    }
  }
  (void)rho;
  double sum = 0;
  for (auto& x : v) {
    x = std::max(0.0, x - theta);
    sum += x;
  }
  if (sum > 0)
    for (auto& x : v) x /= sum;
}

namespace {

struct Candidate {
  std::vector<double> p;
  double eps = kInfeasible;
};

double objective(const std::vector<double>& p, const DEGrid& de,
                 const OptMode& mode, const GridSpec& grid) {
  try {
    DegreeDistribution dist = vector_to_distribution(p);
    InnerResult r = inner_search(dist, de, mode, grid);
    return r.feasible ? r.epsilon : kInfeasible;
  } catch (const Error&) {
    return kInfeasible;
  }
}

Candidate descend(std::vector<double> p, const DEGrid& de, const OptMode& mode,
                  const GridSpec& grid, const OptimizeConfig& cfg) {
  project_simplex(p);
  double fx = objective(p, de, mode, grid);
  double step = 0.05;
  const size_t dim = p.size();
  for (unsigned iter = 0; iter < cfg.max_iters && fx < kInfeasible; ++iter) {
    std::vector<double> gradient(dim, 0.0);
    for (size_t k = 0; k < dim; ++k) {
      std::vector<double> e = p;
      e[k] += cfg.fd_step;
      project_simplex(e);
      double fe = objective(e, de, mode, grid);
      gradient[k] = (fe == kInfeasible) ? 1e3 : (fe - fx) / cfg.fd_step;
    }
    double gnorm = 0;
    for (double gk : gradient) gnorm += gk * gk;
    gnorm = std::sqrt(gnorm);
    if (gnorm < 1e-12) break;

    bool improved = false;
    for (int bt = 0; bt < 10; ++bt) {
      std::vector<double> cand = p;
      for (size_t k = 0; k < dim; ++k) cand[k] -= step / gnorm * gradient[k];
      project_simplex(cand);
      double fc = objective(cand, de, mode, grid);
      if (fc < fx - 1e-9) {
        p = std::move(cand);
        fx = fc;
        improved = true;
        step = std::min(step * 1.5, 0.25);
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return {std::move(p), fx};
}

std::vector<std::vector<double>> make_starts(const OptimizeConfig& cfg) {
  const size_t dim = cfg.D - 1;  // degrees 2..D
  std::vector<std::vector<double>> starts;
  auto two_point = [&](double p2) {
    std::vector<double> v(dim, 0.0);
    v[0] = p2;
    v[dim - 1] += 1.0 - p2;
    return v;
  };
  starts.push_back(two_point(1.0));  // all degree 2
  if (dim > 1) {
    for (double p2 : {0.95, 0.92, 0.90, 0.88, 0.85, 0.80, 0.75, 0.70})
      starts.push_back(two_point(p2));
    // soliton-like tail
    std::vector<double> sol(dim, 0.0);
    for (size_t k = 0; k < dim; ++k) {
      unsigned d = static_cast<unsigned>(k + 2);
      sol[k] = 1.0 / (double(d) * double(d - 1));
    }
    project_simplex(sol);
    starts.push_back(sol);
  }
  Rng rng(cfg.seed);
  while (starts.size() < cfg.multistarts) {
    // Dirichlet(1,..,1) via normalized exponentials.
    std::vector<double> v(dim);
    double sum = 0;
    for (auto& x : v) {
      x = -std::log(rng.unit() + 1e-300);
      sum += x;
    }
    for (auto& x : v) x /= sum;
    starts.push_back(std::move(v));
  }
  if (starts.size() > cfg.multistarts) starts.resize(cfg.multistarts);
  return starts;
}

}  // namespace

CodeSpec OptimizeResult::to_spec(unsigned n, unsigned q, uint64_t seed) const {
  CodeSpec spec;
  spec.g = g;
  spec.n = n;
  spec.q = q;
  spec.R = best.R;
  spec.R_prime = 1.0 - best.delta;
  spec.mode = mode.kind == OptMode::packet_level ? OuterMode::packet_level
                                                 : OuterMode::dense_check;
  spec.P = P;
  spec.seed = seed;
  spec.x0 = best.x0;
  spec.delta = best.delta;
  if (mode.kind == OptMode::robust)
    spec.robust = RobustParams{mode.delta0, mode.Delta};
  return spec;
}

OptimizeResult optimize_distribution(const OptimizeConfig& cfg) {
  if (cfg.D < 2) throw ConfigError("optimize: D must be at least 2");
  if (cfg.mode.kind == OptMode::robust &&
      (cfg.mode.Delta <= 0 || cfg.mode.delta0 <= 0))
    throw ConfigError("optimize: robust mode needs Delta > 0 and delta0 > 0");

  const double robust_delta =
      cfg.mode.kind == OptMode::robust ? cfg.mode.Delta : 0.0;
  DEGrid fine = make_de_grid(cfg.g, cfg.grid.x_points, robust_delta);

  GridSpec coarse_grid = cfg.grid;
  unsigned cf = std::max(1u, cfg.coarse_factor);
  coarse_grid.x0_step *= cf;
  coarse_grid.R_step *= cf;
  coarse_grid.x_points = std::max(500u, cfg.grid.x_points / cf);
  DEGrid coarse = make_de_grid(cfg.g, coarse_grid.x_points, robust_delta);

  auto starts = make_starts(cfg);
  std::vector<Candidate> results(starts.size());
  unsigned threads = std::max(1u, cfg.threads);
  if (threads <= 1 || starts.size() <= 1) {
    for (size_t i = 0; i < starts.size(); ++i)
      results[i] = descend(starts[i], coarse, cfg.mode, coarse_grid, cfg);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&]() {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= starts.size()) return;
          results[i] = descend(starts[i], coarse, cfg.mode, coarse_grid, cfg);
        }
      });
    for (auto& th : pool) th.join();
  }

  // Re-evaluate the leading candidates on the fine grid.
  std::vector<size_t> idx(results.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return results[a].eps < results[b].eps;
  });
  const size_t top = std::min<size_t>(5, idx.size());
  OptimizeResult out{DegreeDistribution({{2, 1.0}}), {}, cfg.g, cfg.mode,
                     0.0,  static_cast<unsigned>(starts.size())};
  bool have = false;
  for (size_t k = 0; k < top; ++k) {
    const auto& cand = results[idx[k]];
    if (cand.eps == kInfeasible) continue;
    DegreeDistribution dist = vector_to_distribution(cand.p);
    InnerResult r = inner_search(dist, fine, cfg.mode, cfg.grid);
    if (!r.feasible) continue;
    if (!have || r.epsilon < out.best.epsilon) {
      out.P = dist;
      out.best = r;
      have = true;
    }
  }
  if (!have) throw ConstructionError("optimize: all starts infeasible");

  // Degree-2 baseline for the same mode; never return anything worse.
  InnerResult base =
      inner_search(DegreeDistribution({{2, 1.0}}), fine, cfg.mode, cfg.grid);
  out.baseline_epsilon = base.feasible ? base.epsilon : kInfeasible;
  if (base.feasible && base.epsilon < out.best.epsilon) {
    out.P = DegreeDistribution({{2, 1.0}});
    out.best = base;
  }

  // Independent verification of the returned design.
  DEParams params{cfg.g, out.best.R, out.P, out.best.x0,
                  std::max(0.0, out.best.delta) + 1e-9,
                  cfg.mode.kind == OptMode::robust
                      ? std::optional<RobustParams>{{cfg.mode.delta0,
                                                     cfg.mode.Delta}}
                      : std::nullopt};
  auto rep = check_convergence(params, cfg.grid.x_points);
  if (!rep.ok)
    throw Error("optimize: returned design failed convergence re-check");
  return out;
}

}  // namespace gnc
