#include "gnc/degree.hpp"

#include <algorithm>
#include <cmath>

#include "gnc/error.hpp"

namespace gnc {

DegreeDistribution::DegreeDistribution(const std::map<unsigned, double>& probs) {
  double sum = 0;
  for (auto [deg, p] : probs) {
    if (p < 0) throw ConfigError("DegreeDistribution: negative probability");
    if (p == 0) continue;
    if (deg < 2) throw ConfigError("DegreeDistribution: degrees start at 2");
    entries_.emplace_back(deg, p);
    sum += p;
  }
  if (entries_.empty())
    throw ConfigError("DegreeDistribution: no positive coefficients");
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("DegreeDistribution: coefficients must sum to 1");
  std::sort(entries_.begin(), entries_.end());
  cdf_.reserve(entries_.size());
  double acc = 0;
  for (auto& [deg, p] : entries_) {
    acc += p;
    cdf_.push_back(acc);
  }
  cdf_.back() = 1.0;
}

double DegreeDistribution::p(unsigned degree) const {
  for (auto& [deg, prob] : entries_)
    if (deg == degree) return prob;
  return 0.0;
}

double DegreeDistribution::mean() const {
  double s = 0;
  for (auto& [deg, prob] : entries_) s += double(deg) * prob;
  return s;
}

double DegreeDistribution::value(double x) const {
  double s = 0;
  for (auto& [deg, prob] : entries_) s += prob * std::pow(x, double(deg));
  return s;
}

double DegreeDistribution::derivative(double x) const {
  double s = 0;
  for (auto& [deg, prob] : entries_)
    s += double(deg) * prob * std::pow(x, double(deg) - 1.0);
  return s;
}

unsigned DegreeDistribution::sample(Rng& rng) const {
  double u = rng.unit();
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  size_t idx = static_cast<size_t>(it - cdf_.begin());
  if (idx >= entries_.size()) idx = entries_.size() - 1;
  return entries_[idx].first;
}

std::vector<unsigned> sample_check_degrees(const DegreeDistribution& p,
                                           size_t num_checks, Rng& rng) {
  std::vector<unsigned> out(num_checks);
  for (auto& d : out) d = p.sample(rng);
  return out;
}

}  // namespace gnc
