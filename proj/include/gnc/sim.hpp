#pragma once

#include <cstdint>
#include <iosfwd>
#include <filesystem>
#include <vector>

#include "gnc/codespec.hpp"

namespace gnc {

struct TrialResult {
  uint64_t n_r = 0;
  double overhead = 0;
  bool success = false;
  unsigned iterations = 0;
};

struct ExperimentConfig {
  CodeSpec spec;
  unsigned trials = 100;
  uint64_t seed = 0;
  size_t payload_bytes = 8;
  unsigned threads = 1;
};

struct ExperimentSummary {
  std::vector<TrialResult> trials;
  double mean_overhead = 0;
  double overhead_stddev = 0;
  unsigned failures = 0;
};

// Deterministic per-trial seed stream.
uint64_t derive_seed(uint64_t master, uint64_t index);

// JSON mirror of ExperimentConfig: {"spec": {...} or "spec_path": "...",
// "trials": n, "seed": s, "payload_bytes": b, "threads": t}.
ExperimentConfig load_experiment_config(const std::filesystem::path& file);

// Fresh graphs and payloads from seed-derived streams, full encode/decode,
// byte-exact verification of the recovered info packets.
TrialResult run_trial(const CodeSpec& spec, uint64_t seed,
                      size_t payload_bytes);

ExperimentSummary run_experiment(const ExperimentConfig& config);

// `trial,N_r,overhead,success,iterations` rows plus a mean footer comment.
void write_summary_csv(std::ostream& os, const ExperimentSummary& s);
// `overhead,ccdf` at each distinct observed overhead: Pr[overhead > x].
void write_ccdf_csv(std::ostream& os, const ExperimentSummary& s);

struct RankModelReport {
  double tv = 0;                    // total variation vs Lemma-1 binomial law
  std::vector<double> empirical;    // rank histogram, normalized
  std::vector<double> predicted;
};

// Pure SRLNC reception to round(r*n) packets; rank histogram over all
// generations and trials against the truncated binomial.
RankModelReport validate_rank_model(unsigned n, unsigned g, unsigned q,
                                    double r, unsigned trials, uint64_t seed);

}  // namespace gnc
