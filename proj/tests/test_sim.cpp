#include "doctest.h"

#include <cmath>
#include <sstream>
#include <filesystem>
#include <fstream>

#include "gnc/analysis.hpp"
#include "gnc/sim.hpp"

using namespace gnc;

namespace {
CodeSpec tiny_spec() {
  CodeSpec s;
  s.g = 4;
  s.n = 8;
  s.q = 256;
  s.R = 0.75;
  s.R_prime = 11.0 / 12.0;
  s.P = DegreeDistribution({{2, 1.0}});
  return s;
}
}  // namespace

TEST_CASE("same seed, same trial result and identical CSV bytes") {
  CodeSpec s = tiny_spec();
  auto a = run_trial(s, 987, 4);
  auto b = run_trial(s, 987, 4);
  CHECK(a.n_r == b.n_r);
  CHECK(a.iterations == b.iterations);
  CHECK(a.success == b.success);

  ExperimentConfig cfg{s, 10, 5, 4, 1};
  auto s1 = run_experiment(cfg);
  auto s2 = run_experiment(cfg);
  std::ostringstream o1, o2;
  write_summary_csv(o1, s1);
  write_summary_csv(o2, s2);
  CHECK(o1.str() == o2.str());
}

TEST_CASE("single full-rank generation at q=256 has near-zero overhead") {
  CodeSpec s;
  s.g = 25;
  s.n = 1;
  s.q = 256;
  s.R = 1.0;
  s.R_prime = 1.0;
  s.P = DegreeDistribution({{2, 1.0}});
  ExperimentConfig cfg{s, 50, 77, 2, 1};
  auto sum = run_experiment(cfg);
  CHECK(sum.failures == 0);
  // Pr[25 uniform GF(256) vectors are dependent] ~ 1/255, so the mean sits
  // within a fraction of one extra packet of zero
  CHECK(sum.mean_overhead >= 0.0);
  CHECK(sum.mean_overhead < 0.01);
}

TEST_CASE("summary statistics and CSV layout") {
  ExperimentConfig cfg{tiny_spec(), 12, 3, 3, 1};
  auto sum = run_experiment(cfg);
  double mean = 0;
  for (auto& t : sum.trials) mean += t.overhead;
  mean /= double(sum.trials.size());
  CHECK(sum.mean_overhead == doctest::Approx(mean));

  std::ostringstream os;
  write_summary_csv(os, sum);
  std::string text = os.str();
  CHECK(text.rfind("trial,N_r,overhead,success,iterations\n", 0) == 0);
  CHECK(text.find("# mean_overhead=") != std::string::npos);
}

TEST_CASE("CCDF is monotone nonincreasing") {
  ExperimentConfig cfg{tiny_spec(), 40, 11, 2, 1};
  auto sum = run_experiment(cfg);
  std::ostringstream os;
  write_ccdf_csv(os, sum);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "overhead,ccdf");
  double prev_ccdf = 2, prev_ov = -10;
  while (std::getline(in, line)) {
    auto comma = line.find(',');
    double ov = std::stod(line.substr(0, comma));
    double cc = std::stod(line.substr(comma + 1));
    CHECK(ov > prev_ov);
    CHECK(cc <= prev_ccdf);
    prev_ov = ov;
    prev_ccdf = cc;
  }
}

TEST_CASE("rank model: zero receptions, tiny-q penalty, q=256 agreement") {
  auto zero = validate_rank_model(10, 4, 256, 0.0, 50, 1);
  CHECK(zero.empirical[0] == doctest::Approx(1.0));
  CHECK(zero.tv == doctest::Approx(0.0).epsilon(1e-12));

  auto big = validate_rank_model(67, 25, 256, 30.0, 400, 2);
  CHECK(big.tv <= 0.05);

  auto gf2 = validate_rank_model(67, 25, 2, 30.0, 400, 2);
  CHECK(gf2.tv > 2 * big.tv);  // finite-q rank loss
}

TEST_CASE("full-rank fraction at large n follows the Poisson tail") {
  // plain SRLNC (no outer or pre-code): the fraction of full-rank
  // generations after r*n receptions approaches 1 - gamma_reg(g, r)
  const unsigned n = 670, g = 25;
  for (double r : {22.0, 26.0, 30.0}) {
    auto rep = validate_rank_model(n, g, 256, r, 30, 3);
    double predicted = 1.0 - gamma_reg(g, r);
    CHECK(std::abs(rep.empirical[g] - predicted) <= 0.02);
  }
}

TEST_CASE("experiment config JSON round trip") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "gnc_test_cfg";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "exp.json");
    out << "{\"spec_path\": \"" << GAMMA_SPEC_DIR
        << "/c4_n1675.json\", \"trials\": 3, \"seed\": 17, "
           "\"payload_bytes\": 4}";
  }
  auto cfg = load_experiment_config(dir / "exp.json");
  CHECK(cfg.trials == 3);
  CHECK(cfg.seed == 17);
  CHECK(cfg.payload_bytes == 4);
  CHECK(cfg.spec.n == 67);
  {
    std::ofstream out(dir / "bad.json");
    out << "{\"trials\": 3}";
  }
  CHECK_THROWS_AS(load_experiment_config(dir / "bad.json"), ParseError);
  fs::remove_all(dir);
}

TEST_CASE("mean overhead decreases from N=1675 to N=8375") {
  auto load = [](const char* f) {
    return load_spec(std::string(GAMMA_SPEC_DIR "/") + f);
  };
  ExperimentConfig small{load("c4_n1675.json"), 40, 91, 4, 1};
  ExperimentConfig large{load("c4_n8375.json"), 20, 92, 4, 1};
  auto s = run_experiment(small);
  auto l = run_experiment(large);
  CHECK(l.mean_overhead < s.mean_overhead);
}
