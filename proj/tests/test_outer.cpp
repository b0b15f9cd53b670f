#include "doctest.h"

#include <set>

#include "gnc/outer.hpp"
#include "gnc/rng.hpp"
#include "oracles.hpp"

using namespace gnc;

namespace {
std::vector<Payload> random_payloads(unsigned count, size_t bytes, Rng& rng) {
  std::vector<Payload> v(count);
  for (auto& p : v) {
    p.resize(bytes);
    rng.fill(p);
  }
  return v;
}
}  // namespace

TEST_CASE("systematic layout: equal degrees give m_i = g-1 before adjustment") {
  std::vector<unsigned> deg(6, 3);
  std::vector<uint32_t> order = {0, 1, 2, 3, 4, 5};
  // d_i/dbar = 1 everywhere -> raw m_i = g-1; K = 6*(g-1) keeps them as-is
  auto m = systematic_layout(deg, 3.0, 4, 18, order);
  for (unsigned v : m) CHECK(v == 3);
}

TEST_CASE("systematic layout: hand-traced degrees (4,2,1,1), mean 2") {
  std::vector<unsigned> deg = {4, 2, 1, 1};
  std::vector<uint32_t> order = {0, 1, 2, 3};
  // raw m = (0,1,2,2): 0.5 rounds half-to-even to 0
  auto m5 = systematic_layout(deg, 2.0, 2, 5, order);
  CHECK(m5 == std::vector<unsigned>{0, 1, 2, 2});
  // one more systematic packet goes to the first generation in order
  auto m6 = systematic_layout(deg, 2.0, 2, 6, order);
  CHECK(m6 == std::vector<unsigned>{1, 1, 2, 2});
  unsigned sum = 0;
  for (unsigned v : m6) sum += v;
  CHECK(sum == 6);
}

TEST_CASE("rate-1 outer code is the identity") {
  const auto& ctx = FieldContext::of(8);
  Rng rng(1);
  auto graph = OuterGraph::build(ctx, OuterMode::dense_check, 3, 4, 12,
                                 DegreeDistribution({{2, 1.0}}), rng);
  CHECK(graph.num_checks() == 0);
  auto in = random_payloads(12, 2, rng);
  CHECK(graph.encode(in) == in);
  CHECK(graph.verify_checks(in));
}

TEST_CASE("dense graph structure: counts, degrees, and layout") {
  const auto& ctx = FieldContext::of(8);
  Rng rng(2);
  const unsigned n = 67, g = 25, K = 1200;
  DegreeDistribution p({{2, 0.9226},
                        {4, 0.0004},
                        {5, 0.0004},
                        {9, 0.0005},
                        {10, 0.0010},
                        {14, 0.0048},
                        {15, 0.0703}});
  auto graph = OuterGraph::build(ctx, OuterMode::dense_check, n, g, K, p, rng);
  CHECK(graph.num_checks() == n * g - K);  // N(1-R)
  unsigned msum = 0;
  for (unsigned v : graph.systematic_counts()) msum += v;
  CHECK(msum == K);
  CHECK(graph.systematic_map().size() == K);
  for (const auto& chk : graph.checks()) {
    CHECK(chk.generations.size() >= 2);
    std::set<uint32_t> uniq(chk.generations.begin(), chk.generations.end());
    CHECK(uniq.size() == chk.generations.size());
    CHECK(!chk.record.empty());
    CHECK(chk.record.back().coeff == 1);
  }
}

TEST_CASE("dense mode: one degree-2 check over two generations, K=3") {
  const auto& ctx = FieldContext::of(8);
  Rng rng(3);
  auto graph = OuterGraph::build(ctx, OuterMode::dense_check, 2, 2, 3,
                                 DegreeDistribution({{2, 1.0}}), rng);
  REQUIRE(graph.num_checks() == 1);
  const auto& rec = graph.checks()[0].record;
  // the recorded equation spans the 3 systematic packets plus the parity
  CHECK(rec.size() <= 4);
  auto in = random_payloads(3, 4, rng);
  auto out = graph.encode(in);
  CHECK(graph.verify_checks(out));
  // parity packet equals the recorded combination of the other packets
  uint32_t parity = rec.back().packet;
  Payload acc(4, 0);
  for (const auto& e : rec) {
    if (e.packet == parity) continue;
    for (size_t k = 0; k < 4; ++k) acc[k] ^= ctx.mul(e.coeff, out[e.packet][k]);
  }
  CHECK(out[parity] == acc);
}

TEST_CASE("verify_checks sees corruption") {
  const auto& ctx = FieldContext::of(8);
  Rng rng(4);
  auto graph = OuterGraph::build(ctx, OuterMode::dense_check, 8, 4, 24,
                                 DegreeDistribution({{2, 0.9}, {3, 0.1}}), rng);
  auto out = graph.encode(random_payloads(24, 3, rng));
  REQUIRE(graph.verify_checks(out));
  out[5][0] ^= 0x40;
  CHECK(!graph.verify_checks(out));
}

TEST_CASE("dense graphs from one seed are identical") {
  const auto& ctx = FieldContext::of(8);
  DegreeDistribution p({{2, 0.8}, {5, 0.2}});
  Rng a(99), b(99);
  auto ga = OuterGraph::build(ctx, OuterMode::dense_check, 10, 5, 35, p, a);
  auto gb = OuterGraph::build(ctx, OuterMode::dense_check, 10, 5, 35, p, b);
  REQUIRE(ga.num_checks() == gb.num_checks());
  CHECK(ga.systematic_map() == gb.systematic_map());
  for (size_t i = 0; i < ga.num_checks(); ++i) {
    CHECK(ga.checks()[i].generations == gb.checks()[i].generations);
    REQUIRE(ga.checks()[i].record.size() == gb.checks()[i].record.size());
    for (size_t k = 0; k < ga.checks()[i].record.size(); ++k) {
      CHECK(ga.checks()[i].record[k].packet == gb.checks()[i].record[k].packet);
      CHECK(ga.checks()[i].record[k].coeff == gb.checks()[i].record[k].coeff);
    }
  }
}

TEST_CASE("generation-selection uniformity over many dense graphs") {
  const auto& ctx = FieldContext::of(8);
  const unsigned n = 20, g = 5, K = 70;  // 30 checks
  DegreeDistribution p({{2, 1.0}});
  Rng rng(12);
  std::vector<uint64_t> incidence(n, 0);
  const int graphs = 400;
  double dsum = 0;
  for (int t = 0; t < graphs; ++t) {
    auto graph = OuterGraph::build(ctx, OuterMode::dense_check, n, g, K, p, rng);
    for (const auto& chk : graph.checks()) {
      dsum += double(chk.generations.size());
      for (uint32_t gi : chk.generations) ++incidence[gi];
    }
  }
  // expected incidence per generation = total check degree / n
  double expected = dsum / double(n);
  for (uint64_t c : incidence)
    CHECK(double(c) == doctest::Approx(expected).epsilon(0.15));
}

TEST_CASE("built check-degree histogram follows P(x) (chi-square)") {
  const auto& ctx = FieldContext::of(8);
  DegreeDistribution p({{2, 0.7}, {3, 0.2}, {5, 0.1}});
  Rng rng(77);
  std::vector<uint64_t> counts(6, 0);
  uint64_t total = 0;
  for (int t = 0; t < 60; ++t) {
    auto graph = OuterGraph::build(ctx, OuterMode::dense_check, 40, 5, 150, p, rng);
    for (const auto& chk : graph.checks()) {
      ++counts[chk.generations.size()];
      ++total;
    }
  }
  double stat = 0;
  for (unsigned d : {2u, 3u, 5u}) {
    double expected = p.p(d) * double(total);
    double diff = double(counts[d]) - expected;
    stat += diff * diff / expected;
  }
  CHECK(stat < 13.8155);  // chi-square df=2, p=0.001
}

TEST_CASE("packet-level construction keeps packets in at most one check") {
  const auto& ctx = FieldContext::of(8);
  Rng rng(5);
  const unsigned n = 67, g = 25, K = 1200;
  DegreeDistribution p({{2, 0.9226},
                        {4, 0.0004},
                        {5, 0.0004},
                        {9, 0.0005},
                        {10, 0.0010},
                        {14, 0.0048},
                        {15, 0.0703}});
  auto graph = OuterGraph::build(ctx, OuterMode::packet_level, n, g, K, p, rng);
  CHECK(graph.num_checks() == n * g - K);
  std::set<uint32_t> seen;
  for (const auto& chk : graph.checks()) {
    std::set<uint32_t> gens;
    for (uint32_t pk : chk.packets) {
      CHECK(!seen.count(pk));
      seen.insert(pk);
      gens.insert(pk / g);
    }
    CHECK(gens.size() == chk.packets.size());  // one packet per generation
    CHECK(gens.size() >= 2);
  }
  auto out = graph.encode(random_payloads(K, 2, rng));
  CHECK(graph.verify_checks(out));
}

TEST_CASE("packet-level degree-2 checks are repetitions") {
  const auto& ctx = FieldContext::of(8);
  Rng rng(6);
  auto graph = OuterGraph::build(ctx, OuterMode::packet_level, 3, 2, 4,
                                 DegreeDistribution({{2, 1.0}}), rng);
  auto out = graph.encode(random_payloads(4, 3, rng));
  for (const auto& chk : graph.checks()) {
    REQUIRE(chk.packets.size() == 2);
    CHECK(out[chk.packets[0]] == out[chk.packets[1]]);
  }
}

TEST_CASE("packet-level mode enforces the mean-degree bound") {
  const auto& ctx = FieldContext::of(8);
  Rng rng(7);
  // R = 0.5 -> requires dbar < 2, but P forces dbar >= 2
  CHECK_THROWS_AS(OuterGraph::build(ctx, OuterMode::packet_level, 4, 2, 4,
                                    DegreeDistribution({{2, 1.0}}), rng),
                  ConfigError);
}

TEST_CASE("max check degree above n is a configuration error") {
  const auto& ctx = FieldContext::of(8);
  Rng rng(8);
  CHECK_THROWS_AS(OuterGraph::build(ctx, OuterMode::dense_check, 3, 4, 8,
                                    DegreeDistribution({{2, 0.5}, {5, 0.5}}),
                                    rng),
                  ConfigError);
}
