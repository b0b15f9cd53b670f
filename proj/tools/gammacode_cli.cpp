#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gnc/analysis.hpp"
#include "gnc/codespec.hpp"
#include "gnc/decoder.hpp"
#include "gnc/error.hpp"
#include "gnc/kernels.hpp"
#include "gnc/linsys.hpp"
#include "gnc/optimize.hpp"
#include "gnc/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAnalysisNegative = 2;
constexpr int kExitDecodeIncomplete = 3;

constexpr char kStreamMagic[4] = {'G', 'N', 'C', '1'};

void write_u32(std::ostream& os, uint32_t v) {
  char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
               char((v >> 24) & 0xff)};
  os.write(b, 4);
}

uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw gnc::ParseError("stream: truncated header");
  return uint32_t(b[0]) | (uint32_t(b[1]) << 8) | (uint32_t(b[2]) << 16) |
         (uint32_t(b[3]) << 24);
}

int cmd_analyze(const std::string& spec_path, double dip_tolerance,
                unsigned grid) {
  gnc::CodeSpec spec = gnc::load_spec(spec_path);
  gnc::DEParams params = gnc::to_de_params(spec);
  double tol = dip_tolerance >= 0 ? dip_tolerance : spec.dip_tolerance;
  gnc::DensityEvolution de(params);

  std::printf("g=%u R=%.6f x0=%.6f target 1-delta=%.6f mode=%s\n", params.g,
              params.R, params.x0, 1.0 - params.delta,
              spec.mode == gnc::OuterMode::dense_check ? "dense-check"
                                                         : "packet-level");
  std::printf("r0 = %.9f\n", de.r0());

  auto traj = de.trajectory();
  std::printf("trajectory: %zu iterations, %s; x0=%.6f", traj.xs.size() - 1,
              traj.converged ? "reaches target" : "stalls",
              traj.xs.front());
  size_t show = std::min<size_t>(6, traj.xs.size());
  for (size_t i = 1; i < show; ++i) std::printf(" -> %.6f", traj.xs[i]);
  if (traj.xs.size() > show) std::printf(" ... -> %.6f", traj.xs.back());
  std::printf("\n");

  auto rep = de.check_convergence(grid, tol);
  std::printf("convergence: %s  closing point = %.6f  min margin = %.3e\n",
              rep.ok ? "open" : "closed", rep.closing_point, rep.min_margin);
  if (params.robust)
    std::printf("robust margin (above %.4f): min f - Delta = %.3e\n",
                1.0 - params.robust->delta0, rep.min_margin_upper);

  if (spec.mode == gnc::OuterMode::packet_level) {
    auto [rp, eps] = de.overhead_improved();
    std::printf("pre-code rate R' = %.6f\n", rp);
    std::printf("epsilon = %.4f%%\n", 100.0 * eps);
  } else {
    std::printf("epsilon = %.4f%%\n", 100.0 * de.overhead_dense());
  }
  return rep.ok ? kExitOk : kExitAnalysisNegative;
}

int cmd_chart(const std::string& spec_path, const std::string& out_path,
              unsigned grid, double from, double to) {
  gnc::CodeSpec spec = gnc::load_spec(spec_path);
  gnc::DensityEvolution de(gnc::to_de_params(spec));
  std::ofstream out(out_path);
  if (!out) throw gnc::Error("chart: cannot write " + out_path);
  gnc::write_evolution_chart(out, de, grid, from, to);
  std::printf("wrote %u rows to %s\n", grid, out_path.c_str());
  return kExitOk;
}

int cmd_optimize(unsigned g, unsigned D, const std::string& mode,
                 double delta0, double Delta, unsigned starts, uint64_t seed,
                 unsigned threads, unsigned n, unsigned q,
                 const std::string& out_path) {
  gnc::OptimizeConfig cfg;
  cfg.g = g;
  cfg.D = D;
  cfg.multistarts = starts;
  cfg.seed = seed;
  cfg.threads = threads;
  if (mode == "dense") {
    cfg.mode.kind = gnc::OptMode::dense;
  } else if (mode == "packet") {
    cfg.mode.kind = gnc::OptMode::packet_level;
  } else if (mode == "robust") {
    cfg.mode.kind = gnc::OptMode::robust;
    cfg.mode.delta0 = delta0;
    cfg.mode.Delta = Delta;
  } else {
    throw gnc::ConfigError("optimize: mode must be dense, packet, or robust");
  }
  auto res = gnc::optimize_distribution(cfg);
  std::printf("best epsilon = %.4f%% (baseline degree-2: %.4f%%)\n",
              100.0 * res.best.epsilon, 100.0 * res.baseline_epsilon);
  std::printf("x0=%.4f R=%.4f 1-delta=%.6f\n", res.best.x0, res.best.R,
              res.best.closing);
  if (cfg.mode.kind == gnc::OptMode::packet_level)
    std::printf("R'=%.6f\n", res.best.r_prime);
  std::printf("P(x):");
  for (auto& [deg, p] : res.P.entries()) std::printf(" p%u=%.4f", deg, p);
  std::printf("\n");
  if (!out_path.empty()) {
    gnc::save_spec(res.to_spec(n, q, seed), out_path);
    std::printf("spec written to %s\n", out_path.c_str());
  }
  return kExitOk;
}

int cmd_simulate(const std::string& spec_path, const std::string& config_path,
                 unsigned trials, uint64_t seed, const std::string& out_path,
                 const std::string& ccdf_path, size_t payload_bytes,
                 unsigned threads) {
  gnc::ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = gnc::load_experiment_config(config_path);
  } else {
    cfg.spec = gnc::load_spec(spec_path);
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.payload_bytes = payload_bytes;
    cfg.threads = threads;
  }
  auto sum = gnc::run_experiment(cfg);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw gnc::Error("simulate: cannot write " + out_path);
    gnc::write_summary_csv(out, sum);
  }
  if (!ccdf_path.empty()) {
    std::ofstream out(ccdf_path);
    if (!out) throw gnc::Error("simulate: cannot write " + ccdf_path);
    gnc::write_ccdf_csv(out, sum);
  }
  std::printf("trials=%zu mean_overhead=%.4f%% stddev=%.4f%% failures=%u\n",
              sum.trials.size(), 100.0 * sum.mean_overhead,
              100.0 * sum.overhead_stddev, sum.failures);
  return kExitOk;
}

int cmd_encode(const std::string& spec_path, const std::string& in_path,
               const std::string& out_path, uint64_t count, uint64_t seed) {
  gnc::CodeSpec spec = gnc::load_spec(spec_path);
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw gnc::Error("encode: cannot open " + in_path);
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  const unsigned kinfo = spec.K_info();
  if (data.empty() || data.size() % kinfo != 0)
    throw gnc::ConfigError(
        "encode: input size must be a positive multiple of K' = " +
        std::to_string(kinfo));
  const size_t payload_bytes = data.size() / kinfo;

  gnc::CodeInstance inst = gnc::instantiate(spec, payload_bytes);
  std::vector<gnc::Payload> info(kinfo);
  for (unsigned t = 0; t < kinfo; ++t)
    info[t].assign(data.begin() + ptrdiff_t(t * payload_bytes),
                   data.begin() + ptrdiff_t((t + 1) * payload_bytes));
  gnc::Block block = gnc::partition(gnc::encode_block(inst, info), spec.g);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw gnc::Error("encode: cannot write " + out_path);
  out.write(kStreamMagic, 4);
  write_u32(out, static_cast<uint32_t>(payload_bytes));
  gnc::Rng rng(seed);
  for (uint64_t i = 0; i < count; ++i) {
    auto bytes = gnc::serialize(gnc::emit_packet(*inst.ctx, block, rng),
                                  inst.ctx->m());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  std::printf("encoded %llu packets (payload %zu bytes) to %s\n",
              static_cast<unsigned long long>(count), payload_bytes,
              out_path.c_str());
  return kExitOk;
}

int cmd_decode(const std::string& spec_path, const std::string& in_path,
               const std::string& out_path) {
  gnc::CodeSpec spec = gnc::load_spec(spec_path);
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw gnc::Error("decode: cannot open " + in_path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kStreamMagic, 4) != 0)
    throw gnc::ParseError("decode: bad stream magic");
  const size_t payload_bytes = read_u32(in);
  if (payload_bytes == 0) throw gnc::ParseError("decode: zero payload size");

  gnc::CodeInstance inst = gnc::instantiate(spec, payload_bytes);
  gnc::Decoder dec(inst);
  const size_t record = gnc::packet_header_bytes(spec.g, inst.ctx->m()) +
                        payload_bytes;
  std::vector<uint8_t> buf(record);
  while (in.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(record))) {
    if (dec.ingest(gnc::deserialize(buf))) dec.iterate();
  }
  if (in.gcount() != 0) throw gnc::ParseError("decode: truncated packet record");

  if (!dec.is_complete()) {
    auto profile = dec.rank_profile();
    std::printf("decode incomplete: %u/%u generations solved after %llu packets\n",
                dec.solved_generations(), spec.n,
                static_cast<unsigned long long>(dec.received_count()));
    std::printf("rank profile:");
    for (unsigned r : profile) std::printf(" %u", r);
    std::printf("\n");
    return kExitDecodeIncomplete;
  }
  auto info = dec.info_payloads();
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw gnc::Error("decode: cannot write " + out_path);
  for (const auto& p : info)
    out.write(reinterpret_cast<const char*>(p.data()),
              static_cast<std::streamsize>(p.size()));
  std::printf("decoded %zu packets to %s\n", info.size(), out_path.c_str());
  return kExitOk;
}

int cmd_validate_lemma1(unsigned n, unsigned g, unsigned q, double r,
                        unsigned trials, uint64_t seed) {
  if (r <= 0) r = 1.2 * double(g);
  auto rep = gnc::validate_rank_model(n, g, q, r, trials, seed);
  std::printf("lemma1: n=%u g=%u q=%u r=%.3f trials=%u  TV=%.6f\n", n, g, q, r,
              trials, rep.tv);
  std::printf("rank     empirical   predicted\n");
  for (size_t i = 0; i < rep.empirical.size(); ++i)
    std::printf("%4zu   %.6f   %.6f\n", i, rep.empirical[i], rep.predicted[i]);
  return kExitOk;
}

int cmd_validate_rankbound(unsigned rows, unsigned cols, unsigned q,
                           unsigned trials, uint64_t seed) {
  const gnc::FieldContext& ctx = gnc::FieldContext::of_q(q);
  gnc::Rng rng(seed);
  std::vector<std::vector<uint8_t>> mat(rows, std::vector<uint8_t>(cols));
  uint64_t deficient = 0;
  for (unsigned t = 0; t < trials; ++t) {
    for (auto& row : mat)
      for (auto& v : row) v = rng.field_element(ctx.m());
    if (gnc::rank_oracle(ctx, mat) < std::min(rows, cols)) ++deficient;
  }
  double emp = double(deficient) / double(trials);
  double bound = 1.0 / ((double(q) - 1.0) *
                        std::pow(double(q), double(rows) - double(cols)));
  std::printf("rankbound: %ux%u over GF(%u), trials=%u\n", rows, cols, q,
              trials);
  std::printf("empirical Pr[rank<%u] = %.3e  bound = %.3e\n",
              std::min(rows, cols), emp, bound);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gamma network codes: analysis, design, simulation, codec"};
  app.require_subcommand(1);

  std::string spec_path, in_path, out_path, ccdf_path, mode = "dense";
  double dip_tolerance = -1, from = 0.0, to = 1.0, r = 0, delta0 = 0.2,
         Delta = 0.03;
  unsigned grid = 10000, trials = 100, threads = 1, g = 25, D = 10, n = 67,
           q = 256, rows = 6, cols = 4;
  uint64_t seed = 1, count = 0;
  size_t payload_bytes = 8;
  bool lemma1 = false, rankbound = false;
  std::string backend;

  app.add_option("--backend", backend, "force kernel backend (scalar|avx2|neon)");

  auto* an = app.add_subcommand("analyze", "density-evolution report for a spec");
  an->add_option("--spec", spec_path, "spec JSON")->required();
  an->add_option("--dip-tolerance", dip_tolerance,
                 "convergence slack for rounded designs (default: from spec)");
  an->add_option("--grid", grid, "grid points");

  auto* ch = app.add_subcommand("chart", "decoding evolution chart CSV");
  ch->add_option("--spec", spec_path, "spec JSON")->required();
  ch->add_option("--out", out_path, "output CSV")->required();
  ch->add_option("--grid", grid, "grid points");
  ch->add_option("--from", from, "lower x");
  ch->add_option("--to", to, "upper x");

  auto* op = app.add_subcommand("optimize", "degree-distribution optimization");
  op->add_option("--g", g, "generation size");
  op->add_option("--D", D, "maximum check degree");
  op->add_option("--mode", mode, "dense | packet | robust");
  op->add_option("--delta0", delta0, "robust: margin region starts at 1-delta0");
  op->add_option("--Delta", Delta, "robust: required margin");
  op->add_option("--starts", trials, "multistart count")->default_val(32);
  op->add_option("--seed", seed, "rng seed");
  op->add_option("--threads", threads, "worker threads");
  op->add_option("--n", n, "generation count for the emitted spec");
  op->add_option("--q", q, "field size for the emitted spec");
  op->add_option("--out", out_path, "write optimized spec JSON here");

  std::string config_path;
  auto* si = app.add_subcommand("simulate", "Monte Carlo overhead experiment");
  si->add_option("--spec", spec_path, "spec JSON");
  si->add_option("--config", config_path, "experiment config JSON (alternative to flags)");
  si->add_option("--trials", trials, "trial count");
  si->add_option("--seed", seed, "rng seed");
  si->add_option("--out", out_path, "summary CSV");
  si->add_option("--ccdf", ccdf_path, "CCDF CSV");
  si->add_option("--payload-bytes", payload_bytes, "payload bytes per packet");
  si->add_option("--threads", threads, "worker threads");

  auto* en = app.add_subcommand("encode", "encode a file into a packet stream");
  en->add_option("--spec", spec_path, "spec JSON")->required();
  en->add_option("--in", in_path, "input file")->required();
  en->add_option("--out", out_path, "packet stream")->required();
  en->add_option("--count", count, "number of packets to emit")->required();
  en->add_option("--seed", seed, "emission rng seed");

  auto* de = app.add_subcommand("decode", "decode a packet stream to a file");
  de->add_option("--spec", spec_path, "spec JSON")->required();
  de->add_option("--in", in_path, "packet stream")->required();
  de->add_option("--out", out_path, "output file")->required();

  auto* va = app.add_subcommand("validate", "statistical model validation");
  va->add_flag("--lemma1", lemma1, "rank distribution vs truncated binomial");
  va->add_flag("--rankbound", rankbound, "random-matrix rank-deficiency bound");
  va->add_option("--n", n, "generations");
  va->add_option("--g", g, "generation size");
  va->add_option("--q", q, "field size");
  va->add_option("--r", r, "normalized receptions (default 1.2*g)");
  va->add_option("--rows", rows, "matrix rows (rankbound)");
  va->add_option("--cols", cols, "matrix cols (rankbound)");
  va->add_option("--trials", trials, "trials");
  va->add_option("--seed", seed, "rng seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!backend.empty()) {
      if (backend == "scalar")
        gnc::kern::select(gnc::kern::Backend::scalar);
      else if (backend == "avx2")
        gnc::kern::select(gnc::kern::Backend::avx2);
      else if (backend == "neon")
        gnc::kern::select(gnc::kern::Backend::neon);
      else
        throw gnc::ConfigError("unknown backend: " + backend);
    }
    if (an->parsed()) return cmd_analyze(spec_path, dip_tolerance, grid);
    if (ch->parsed()) return cmd_chart(spec_path, out_path, grid, from, to);
    if (op->parsed())
      return cmd_optimize(g, D, mode, delta0, Delta, trials, seed, threads, n,
                          q, out_path);
    if (si->parsed()) {
      if (spec_path.empty() && config_path.empty())
        throw gnc::ConfigError("simulate: pass --spec or --config");
      return cmd_simulate(spec_path, config_path, trials, seed, out_path,
                          ccdf_path, payload_bytes, threads);
    }
    if (en->parsed()) return cmd_encode(spec_path, in_path, out_path, count, seed);
    if (de->parsed()) return cmd_decode(spec_path, in_path, out_path);
    if (va->parsed()) {
      if (lemma1) return cmd_validate_lemma1(n, g, q, r, trials, seed);
      if (rankbound) return cmd_validate_rankbound(rows, cols, q, trials, seed);
      std::fprintf(stderr, "validate: pass --lemma1 or --rankbound\n");
      return kExitUsage;
    }
  } catch (const gnc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
