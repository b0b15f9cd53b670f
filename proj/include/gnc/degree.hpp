#pragma once

#include <map>
#include <vector>

#include "gnc/rng.hpp"

namespace gnc {

// Check-degree distribution P(x) = sum_{i>=2} p_i x^i.
class DegreeDistribution {
 public:
  // All mass on degree 2.
  DegreeDistribution() : DegreeDistribution({{2, 1.0}}) {}
  explicit DegreeDistribution(const std::map<unsigned, double>& probs);

  double p(unsigned degree) const;
  unsigned min_degree() const { return entries_.front().first; }
  unsigned max_degree() const { return entries_.back().first; }
  const std::vector<std::pair<unsigned, double>>& entries() const {
    return entries_;
  }

  double mean() const;              // d-bar = sum i p_i
  double value(double x) const;     // P(x)
  double derivative(double x) const;  // P'(x)

  unsigned sample(Rng& rng) const;

 private:
  std::vector<std::pair<unsigned, double>> entries_;  // sorted by degree
  std::vector<double> cdf_;
};

std::vector<unsigned> sample_check_degrees(const DegreeDistribution& p,
                                           size_t num_checks, Rng& rng);

}  // namespace gnc
