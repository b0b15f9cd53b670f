#include "gnc/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <thread>

#include "gnc/analysis.hpp"
#include "gnc/decoder.hpp"
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gnc/error.hpp"

namespace gnc {

uint64_t derive_seed(uint64_t master, uint64_t index) {
  uint64_t s = master ^ (0x9e3779b97f4a7c15ull * (index + 1));
  return splitmix64(s);
}

TrialResult run_trial(const CodeSpec& spec, uint64_t seed,
                      size_t payload_bytes) {
  CodeInstance inst = instantiate(spec, payload_bytes, seed);
  Rng master(seed);
  Rng pay_rng = master.fork(0x706179);  // "pay"
  Rng src_rng = master.fork(0x737263);  // "src"

  const unsigned kinfo = spec.K_info();
  std::vector<Payload> info(kinfo);
  for (auto& p : info) {
    p.resize(payload_bytes);
    pay_rng.fill(p);
  }

  Block block = partition(encode_block(inst, info), spec.g);
  Decoder dec(inst);
  auto source = [&]() { return emit_packet(*inst.ctx, block, src_rng); };
  DecodeResult res =
      run_until_success(dec, source, uint64_t(10) * std::max(1u, kinfo));

  TrialResult out;
  out.n_r = res.n_r;
  out.success = res.success;
  out.iterations = res.iterations;
  out.overhead = (double(res.n_r) - double(kinfo)) / double(kinfo);
  if (res.success) {
    auto recovered = dec.info_payloads();
    for (unsigned t = 0; t < kinfo; ++t)
      if (recovered[t] != info[t])
        throw Error("run_trial: recovered info packets differ from originals");
  }
  return out;
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  ExperimentSummary sum;
  sum.trials.resize(config.trials);
  unsigned threads = std::max(1u, config.threads);
  if (threads <= 1) {
    for (unsigned i = 0; i < config.trials; ++i)
      sum.trials[i] = run_trial(config.spec, derive_seed(config.seed, i),
                                config.payload_bytes);
  } else {
    std::vector<std::thread> pool;
    std::atomic<unsigned> next{0};
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&]() {
        for (;;) {
          unsigned i = next.fetch_add(1);
          if (i >= config.trials) return;
          sum.trials[i] = run_trial(config.spec, derive_seed(config.seed, i),
                                    config.payload_bytes);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  double acc = 0;
  for (auto& t : sum.trials) {
    acc += t.overhead;
    if (!t.success) ++sum.failures;
  }
  sum.mean_overhead = acc / double(std::max<size_t>(1, sum.trials.size()));
  double var = 0;
  for (auto& t : sum.trials) {
    double d = t.overhead - sum.mean_overhead;
    var += d * d;
  }
  sum.overhead_stddev =
      sum.trials.size() > 1 ? std::sqrt(var / double(sum.trials.size() - 1)) : 0;
  return sum;
}

void write_summary_csv(std::ostream& os, const ExperimentSummary& s) {
  os << "trial,N_r,overhead,success,iterations\n";
  for (size_t i = 0; i < s.trials.size(); ++i) {
    const auto& t = s.trials[i];
    os << i << ',' << t.n_r << ',' << t.overhead << ','
       << (t.success ? 1 : 0) << ',' << t.iterations << '\n';
  }
  os << "# mean_overhead=" << s.mean_overhead << '\n';
}

void write_ccdf_csv(std::ostream& os, const ExperimentSummary& s) {
  os << "overhead,ccdf\n";
  std::vector<double> ov;
  ov.reserve(s.trials.size());
  for (auto& t : s.trials) ov.push_back(t.overhead);
  std::sort(ov.begin(), ov.end());
  const double total = double(ov.size());
  for (size_t i = 0; i < ov.size(); ++i) {
    if (i + 1 < ov.size() && ov[i + 1] == ov[i]) continue;  // last of a tie
    os << ov[i] << ',' << double(ov.size() - i - 1) / total << '\n';
  }
}


ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("experiment config: cannot open " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("spec_path")) {
      auto p = std::filesystem::path(j.at("spec_path").get<std::string>());
      if (p.is_relative()) p = file.parent_path() / p;
      cfg.spec = load_spec(p);
    } else {
      cfg.spec = parse_spec(j.at("spec").dump());
    }
    cfg.trials = j.value("trials", 100u);
    cfg.seed = j.value("seed", uint64_t{0});
    cfg.payload_bytes = j.value("payload_bytes", size_t{8});
    cfg.threads = j.value("threads", 1u);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  if (cfg.trials < 1) throw ParseError("experiment config: trials must be >= 1");
  return cfg;
}

RankModelReport validate_rank_model(unsigned n, unsigned g, unsigned q,
                                    double r, unsigned trials, uint64_t seed) {
  const FieldContext& ctx = FieldContext::of_q(q);
  auto receptions = static_cast<uint64_t>(std::llround(r * double(n)));
  std::vector<uint64_t> hist(g + 1, 0);
  std::vector<uint8_t> coeffs(g);
  for (unsigned t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    std::vector<GenerationSystem> systems;
    systems.reserve(n);
    for (unsigned i = 0; i < n; ++i) systems.emplace_back(ctx, g, 0);
    for (uint64_t k = 0; k < receptions; ++k) {
      auto gi = static_cast<unsigned>(rng.below(n));
      for (auto& c : coeffs) c = rng.field_element(ctx.m());
      if (systems[gi].rank() < g)
        systems[gi].add_equation(coeffs, std::span<const uint8_t>{});
    }
    for (auto& s : systems) ++hist[s.rank()];
  }
  RankModelReport rep;
  rep.predicted = rank_pmf_binomial(double(receptions) / double(n), n, g);
  rep.empirical.resize(g + 1);
  const double total = double(trials) * double(n);
  for (unsigned i = 0; i <= g; ++i) rep.empirical[i] = double(hist[i]) / total;
  double tv = 0;
  for (unsigned i = 0; i <= g; ++i)
    tv += std::abs(rep.empirical[i] - rep.predicted[i]);
  rep.tv = 0.5 * tv;
  return rep;
}

}  // namespace gnc
