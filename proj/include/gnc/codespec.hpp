#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "gnc/analysis.hpp"
#include "gnc/degree.hpp"
#include "gnc/outer.hpp"

namespace gnc {

// All design parameters of one code, as stored in spec JSON files.
struct CodeSpec {
  unsigned g = 25;
  unsigned n = 67;
  unsigned q = 256;
  double R = 0.7163;
  double R_prime = 0.97;
  OuterMode mode = OuterMode::dense_check;
  DegreeDistribution P;
  uint64_t seed = 0;
  // Design metadata used by analyze; optional in the file.
  std::optional<double> x0;
  std::optional<double> delta;
  std::optional<RobustParams> robust;
  double dip_tolerance = 0;  // convergence-check slack for rounded designs

  unsigned N() const { return n * g; }
  unsigned K() const {
    return static_cast<unsigned>(std::lround(R * double(N())));
  }
  unsigned K_info() const {
    return static_cast<unsigned>(std::lround(R_prime * double(K())));
  }
};

CodeSpec parse_spec(const std::string& json_text);
CodeSpec load_spec(const std::filesystem::path& file);
std::string spec_to_json(const CodeSpec& spec);
void save_spec(const CodeSpec& spec, const std::filesystem::path& file);

// Requires spec.x0. delta falls back to 1 - R_prime when absent.
DEParams to_de_params(const CodeSpec& spec);

}  // namespace gnc
