#include "gnc/outer.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "gnc/error.hpp"
#include "gnc/kernels.hpp"

namespace gnc {

namespace {

std::vector<uint32_t> sample_distinct(unsigned n, unsigned k, Rng& rng) {
  std::set<uint32_t> s;
  while (s.size() < k) s.insert(static_cast<uint32_t>(rng.below(n)));
  return {s.begin(), s.end()};
}

// Kuhn augmenting paths: assign each parity slot a distinct check incident to
// its generation, visiting checks in the generation's preference order.
struct SlotMatcher {
  const std::vector<std::vector<uint32_t>>& pref;  // per gen: check ids
  std::vector<int> owner_gen;                      // per check: gen or -1
  std::vector<uint32_t> stamp;
  uint32_t round = 0;

  explicit SlotMatcher(const std::vector<std::vector<uint32_t>>& p,
                       size_t num_checks)
      : pref(p), owner_gen(num_checks, -1), stamp(num_checks, 0) {}

  bool augment(uint32_t gen) {
    for (uint32_t ci : pref[gen]) {
      if (stamp[ci] == round) continue;
      stamp[ci] = round;
      if (owner_gen[ci] < 0 || augment(static_cast<uint32_t>(owner_gen[ci]))) {
        owner_gen[ci] = static_cast<int>(gen);
        return true;
      }
    }
    return false;
  }

  bool match_slot(uint32_t gen) {
    ++round;
    return augment(gen);
  }
};

struct DenseTopology {
  std::vector<OuterCheck> checks;
  std::vector<unsigned> m;
  std::vector<uint32_t> order;
  std::vector<std::vector<uint32_t>> parity_checks;
  double dbar = 0;
};

bool build_dense_topology(unsigned n, unsigned g, unsigned K,
                          const DegreeDistribution& p, Rng& rng,
                          DenseTopology& out) {
  const unsigned N = n * g;
  const size_t num_checks = N - K;
  out.checks.assign(num_checks, {});
  std::vector<unsigned> deg(n, 0);
  double degsum = 0;
  for (auto& c : out.checks) {
    unsigned d = p.sample(rng);
    c.generations = sample_distinct(n, d, rng);
    degsum += d;
    for (uint32_t gi : c.generations) ++deg[gi];
  }
  out.dbar = num_checks ? degsum / double(num_checks) : 0.0;

  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](uint32_t a, uint32_t b) { return deg[a] > deg[b]; });

  out.m = systematic_layout(deg, out.dbar, g, K, out.order);

  // Incident checks per generation, highest check degree first.
  std::vector<std::vector<uint32_t>> inc(n);
  for (uint32_t ci = 0; ci < num_checks; ++ci)
    for (uint32_t gi : out.checks[ci].generations) inc[gi].push_back(ci);
  for (auto& v : inc)
    std::stable_sort(v.begin(), v.end(), [&](uint32_t a, uint32_t b) {
      return out.checks[a].generations.size() > out.checks[b].generations.size();
    });

  SlotMatcher matcher(inc, num_checks);
  for (uint32_t gi : out.order) {
    unsigned need = g - out.m[gi];
    if (need > inc[gi].size()) return false;
    for (unsigned k = 0; k < need; ++k)
      if (!matcher.match_slot(gi)) return false;
  }

  out.parity_checks.assign(n, {});
  for (uint32_t ci = 0; ci < num_checks; ++ci) {
    int gi = matcher.owner_gen[ci];
    if (gi >= 0) out.parity_checks[static_cast<size_t>(gi)].push_back(ci);
  }
  for (auto& v : out.parity_checks)
    std::stable_sort(v.begin(), v.end(), [&](uint32_t a, uint32_t b) {
      return out.checks[a].generations.size() > out.checks[b].generations.size();
    });
  return true;
}

}  // namespace

std::vector<unsigned> systematic_layout(const std::vector<unsigned>& gen_degree,
                                        double mean_check_degree, unsigned g,
                                        unsigned K,
                                        const std::vector<uint32_t>& order) {
  const size_t n = gen_degree.size();
  std::vector<unsigned> m(n, g);
  if (mean_check_degree > 0) {
    for (size_t i = 0; i < n; ++i) {
      double ratio = double(gen_degree[i]) / mean_check_degree;
      long r = std::lrint(ratio);  // defaults to round-half-even
      long v = long(g) - r;
      m[i] = static_cast<unsigned>(std::clamp<long>(v, 0, long(g)));
    }
  }
  long diff = long(K) - long(std::accumulate(m.begin(), m.end(), 0ll));
  size_t oi = 0;
  size_t guard = 0;
  while (diff != 0) {
    if (++guard > 4 * n * size_t(g) + 16)
      throw ConstructionError("systematic_layout: cannot reach sum K");
    uint32_t i = order[oi % n];
    ++oi;
    if (diff > 0 && m[i] < g) {
      ++m[i];
      --diff;
    } else if (diff < 0 && m[i] > 0) {
      --m[i];
      ++diff;
    }
  }
  return m;
}

OuterGraph OuterGraph::build(const FieldContext& ctx, OuterMode mode,
                             unsigned n, unsigned g, unsigned K,
                             const DegreeDistribution& p, Rng& rng,
                             unsigned max_attempts) {
  if (n == 0 || g == 0) throw ConfigError("outer: n and g must be positive");
  const unsigned N = n * g;
  if (K > N) throw ConfigError("outer: K exceeds N");
  if (K < N && p.max_degree() > n)
    throw ConfigError("outer: max check degree " +
                      std::to_string(p.max_degree()) + " exceeds n=" +
                      std::to_string(n));

  OuterGraph graph;
  graph.ctx_ = &ctx;
  graph.mode_ = mode;
  graph.n_ = n;
  graph.g_ = g;
  graph.K_ = K;

  if (K == N) {  // rate-1 outer code: identity
    graph.m_.assign(n, g);
    graph.order_.resize(n);
    std::iota(graph.order_.begin(), graph.order_.end(), 0);
    graph.sysmap_.resize(N);
    std::iota(graph.sysmap_.begin(), graph.sysmap_.end(), 0);
    graph.parity_checks_.assign(n, {});
    return graph;
  }

  if (mode == OuterMode::dense_check) {
    DenseTopology topo;
    bool ok = false;
    for (unsigned attempt = 0; attempt < max_attempts && !ok; ++attempt)
      ok = build_dense_topology(n, g, K, p, rng, topo);
    if (!ok)
      throw ConstructionError(
          "outer: no feasible parity assignment after resampling");
    graph.checks_ = std::move(topo.checks);
    graph.m_ = std::move(topo.m);
    graph.order_ = std::move(topo.order);
    graph.parity_checks_ = std::move(topo.parity_checks);
    graph.dbar_ = topo.dbar;

    graph.sysmap_.reserve(K);
    for (uint32_t gi : graph.order_)
      for (unsigned j = 0; j < graph.m_[gi]; ++j)
        graph.sysmap_.push_back(gi * g + j);

    // Record each check's equation against the packets available when its
    // parity is produced: all systematic packets plus previously produced
    // parities. A coefficient is drawn for every available packet.
    std::vector<std::vector<uint32_t>> avail(n);
    for (unsigned gi = 0; gi < n; ++gi)
      for (unsigned j = 0; j < graph.m_[gi]; ++j) avail[gi].push_back(gi * g + j);
    for (uint32_t gi : graph.order_) {
      for (size_t k = 0; k < graph.parity_checks_[gi].size(); ++k) {
        uint32_t ci = graph.parity_checks_[gi][k];
        uint32_t pk = gi * g + graph.m_[gi] + static_cast<uint32_t>(k);
        auto& rec = graph.checks_[ci].record;
        for (uint32_t gk : graph.checks_[ci].generations) {
          for (uint32_t pkt : avail[gk]) {
            uint8_t c = rng.field_element(ctx.m());
            if (c) rec.push_back({pkt, c});
          }
        }
        rec.push_back({pk, 1});
        avail[gi].push_back(pk);
      }
    }
    return graph;
  }

  // packet_level: every packet joins at most one check, one packet per
  // distinct generation of the check.
  if (p.mean() >= 1.0 / (1.0 - double(K) / double(N)))
    throw ConfigError("outer: packet-level mode needs mean degree < 1/(1-R)");
  const size_t num_checks = N - K;
  for (unsigned attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<std::vector<uint32_t>> free_slots(n);
    for (unsigned gi = 0; gi < n; ++gi) {
      free_slots[gi].resize(g);
      std::iota(free_slots[gi].begin(), free_slots[gi].end(), 0);
    }
    std::vector<OuterCheck> checks(num_checks);
    bool ok = true;
    for (auto& chk : checks) {
      unsigned d = p.sample(rng);
      std::vector<uint32_t> gens;
      bool found = false;
      for (unsigned tries = 0; tries < 500; ++tries) {
        gens = sample_distinct(n, d, rng);
        if (std::all_of(gens.begin(), gens.end(), [&](uint32_t gi) {
              return !free_slots[gi].empty();
            })) {
          found = true;
          break;
        }
      }
      if (!found) {
        ok = false;
        break;
      }
      chk.generations = gens;
      for (uint32_t gi : gens) {
        auto& fs = free_slots[gi];
        size_t pick = static_cast<size_t>(rng.below(fs.size()));
        uint32_t slot = fs[pick];
        fs[pick] = fs.back();
        fs.pop_back();
        chk.packets.push_back(gi * g + slot);
      }
    }
    if (!ok) continue;
    graph.checks_ = std::move(checks);
    graph.dbar_ = 0;
    for (auto& c : graph.checks_) graph.dbar_ += double(c.packets.size());
    graph.dbar_ /= double(num_checks);
    std::vector<uint8_t> designated(N, 0);
    for (auto& c : graph.checks_) designated[c.packets.back()] = 1;
    graph.m_.assign(n, 0);
    graph.sysmap_.reserve(K);
    for (uint32_t pk = 0; pk < N; ++pk)
      if (!designated[pk]) {
        graph.sysmap_.push_back(pk);
        ++graph.m_[pk / g];
      }
    graph.order_.resize(n);
    std::iota(graph.order_.begin(), graph.order_.end(), 0);
    return graph;
  }
  throw ConstructionError("outer: packet-level sampling failed");
}

std::vector<Payload> OuterGraph::encode(
    const std::vector<Payload>& precoded) const {
  if (precoded.size() != K_)
    throw ConfigError("outer encode: expected " + std::to_string(K_) +
                      " pre-coded packets");
  const size_t pay = precoded.empty() ? 0 : precoded[0].size();
  std::vector<Payload> out(N());
  for (uint32_t t = 0; t < K_; ++t) out[sysmap_[t]] = precoded[t];

  if (mode_ == OuterMode::dense_check) {
    for (uint32_t gi : order_) {
      for (size_t k = 0; k < parity_checks_[gi].size(); ++k) {
        uint32_t ci = parity_checks_[gi][k];
        uint32_t pk = gi * g_ + m_[gi] + static_cast<uint32_t>(k);
        Payload acc(pay, 0);
        for (const auto& e : checks_[ci].record) {
          if (e.packet == pk) continue;
          if (e.coeff == 1)
            kern::xor_row(acc.data(), out[e.packet].data(), pay);
          else
            kern::muladd_row(acc.data(), out[e.packet].data(), pay,
                             ctx_->mul_tables(e.coeff));
        }
        out[pk] = std::move(acc);
      }
    }
  } else {
    for (const auto& chk : checks_) {
      uint32_t des = chk.packets.back();
      Payload acc(pay, 0);
      for (uint32_t p : chk.packets) {
        if (p == des) continue;
        kern::xor_row(acc.data(), out[p].data(), pay);
      }
      out[des] = std::move(acc);
    }
  }
  return out;
}

bool OuterGraph::verify_checks(const std::vector<Payload>& block) const {
  if (block.size() != N()) return false;
  const size_t pay = block.empty() ? 0 : block[0].size();
  Payload acc(pay);
  for (const auto& chk : checks_) {
    std::fill(acc.begin(), acc.end(), 0);
    if (mode_ == OuterMode::dense_check) {
      for (const auto& e : chk.record) {
        if (e.coeff == 1)
          kern::xor_row(acc.data(), block[e.packet].data(), pay);
        else
          kern::muladd_row(acc.data(), block[e.packet].data(), pay,
                           ctx_->mul_tables(e.coeff));
      }
    } else {
      for (uint32_t p : chk.packets)
        kern::xor_row(acc.data(), block[p].data(), pay);
    }
    for (uint8_t b : acc)
      if (b) return false;
  }
  return true;
}

}  // namespace gnc
