#include "gnc/precode.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

#include "gnc/error.hpp"
#include "gnc/kernels.hpp"

namespace gnc {

PrecodeGraph PrecodeGraph::build(unsigned info_count, double rate, Rng& rng) {
  if (rate <= 0 || rate > 1) throw ConfigError("precode: rate out of (0,1]");
  auto coded = static_cast<unsigned>(std::lround(double(info_count) / rate));
  return build_exact(info_count, coded, rng);
}

PrecodeGraph PrecodeGraph::build_exact(unsigned info_count,
                                       unsigned coded_count, Rng& rng) {
  if (coded_count < info_count)
    throw ConfigError("precode: coded count below info count");
  PrecodeGraph g;
  g.info_count_ = info_count;
  g.coded_count_ = coded_count;
  const unsigned C = coded_count - info_count;
  if (C == 0) return g;
  if (info_count == 0) throw ConfigError("precode: no info packets");

  // Info variables repeat dv ~ ln(1/(1-R')) times; the capacity-achieving
  // right-regular family at this rate has mean check degree dv/(1-R').
  const double rate = double(info_count) / double(coded_count);
  const unsigned dv = std::max<unsigned>(
      3, static_cast<unsigned>(std::lround(std::log(1.0 / (1.0 - rate)))));

  std::vector<uint32_t> sockets;
  sockets.reserve(size_t(dv) * info_count);
  for (unsigned rep = 0; rep < dv; ++rep) {
    std::vector<uint32_t> perm(info_count);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    sockets.insert(sockets.end(), perm.begin(), perm.end());
  }

  g.checks_.resize(C);
  const size_t per = sockets.size() / C;
  const size_t extra = sockets.size() - per * C;
  std::deque<uint32_t> stream(sockets.begin(), sockets.end());
  for (unsigned t = 0; t < C; ++t) {
    std::set<uint32_t> members;
    members.insert(info_count + t);
    if (t > 0) members.insert(info_count + t - 1);
    size_t want = per + (t < extra ? 1 : 0);
    size_t taken = 0;
    std::deque<uint32_t> skipped;
    while (taken < want && !stream.empty()) {
      uint32_t v = stream.front();
      stream.pop_front();
      if (members.insert(v).second)
        ++taken;
      else
        skipped.push_back(v);  // duplicate within this check; defer
    }
    for (auto it = skipped.rbegin(); it != skipped.rend(); ++it)
      stream.push_front(*it);
    g.checks_[t].assign(members.begin(), members.end());
  }
  // Leftover deferred sockets join the last checks that can still take them.
  unsigned t = C;
  while (!stream.empty() && t-- > 0) {
    std::set<uint32_t> members(g.checks_[t].begin(), g.checks_[t].end());
    while (!stream.empty() && members.insert(stream.front()).second)
      stream.pop_front();
    g.checks_[t].assign(members.begin(), members.end());
  }
  return g;
}

std::vector<Payload> PrecodeGraph::encode(
    const std::vector<Payload>& info) const {
  if (info.size() != info_count_)
    throw ConfigError("precode encode: wrong info packet count");
  std::vector<Payload> out(info.begin(), info.end());
  out.resize(coded_count_);
  const size_t pay = info_count_ ? info[0].size() : 0;
  for (unsigned t = 0; t < coded_count_ - info_count_; ++t) {
    Payload acc(pay, 0);
    for (uint32_t v : checks_[t]) {
      if (v == info_count_ + t) continue;  // the parity being produced
      kern::xor_row(acc.data(), out[v].data(), pay);
    }
    out[info_count_ + t] = std::move(acc);
  }
  return out;
}

std::vector<std::pair<uint32_t, Payload>> peel_step(
    const PrecodeGraph& graph, std::vector<std::optional<Payload>>& known) {
  const auto& checks = graph.checks();
  std::vector<int> unknowns(checks.size(), 0);
  for (size_t ci = 0; ci < checks.size(); ++ci)
    for (uint32_t v : checks[ci])
      if (!known[v]) ++unknowns[ci];

  std::vector<std::pair<uint32_t, Payload>> recovered;
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t ci = 0; ci < checks.size(); ++ci) {
      if (unknowns[ci] == 0) {
        continue;
      }
      if (unknowns[ci] != 1) continue;
      uint32_t target = 0;
      Payload acc;
      bool first = true;
      for (uint32_t v : checks[ci]) {
        if (!known[v]) {
          target = v;
          continue;
        }
        if (first) {
          acc = *known[v];
          first = false;
        } else {
          kern::xor_row(acc.data(), known[v]->data(), acc.size());
        }
      }
      known[target] = acc;
      recovered.emplace_back(target, std::move(acc));
      // update counters
      for (size_t cj = 0; cj < checks.size(); ++cj)
        for (uint32_t v : checks[cj])
          if (v == target) --unknowns[cj];
      progress = true;
    }
  }
  // sanity of saturated checks
  for (size_t ci = 0; ci < checks.size(); ++ci) {
    if (unknowns[ci] != 0) continue;
    Payload acc;
    bool first = true;
    for (uint32_t v : checks[ci]) {
      if (first) {
        acc = *known[v];
        first = false;
      } else {
        kern::xor_row(acc.data(), known[v]->data(), acc.size());
      }
    }
    for (uint8_t b : acc)
      if (b) throw InconsistentSystem("peel_step: inconsistent pre-code state");
  }
  return recovered;
}

}  // namespace gnc
