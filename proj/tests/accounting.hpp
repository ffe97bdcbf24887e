#pragma once

// Exact bookkeeping identities for one game, recomputed from its view-event
// log. Shared by the game unit tests and the acceptance suite. Exactness
// assumes dyadic economy values and pi, so every sum is exact in binary.

#include <span>
#include <string>
#include <vector>

#include "snsmq/game.hpp"
#include "snsmq/genome.hpp"
#include "snsmq/network.hpp"

namespace accounting {

/// Returns an empty string when every identity holds, otherwise a description.
inline std::string check(const snsmq::Graph& g, std::span<const snsmq::StrategyParams> st,
                         const snsmq::SchemeConfig& scheme, const snsmq::EconomyConfig& e,
                         const snsmq::GameTally& t, const std::vector<snsmq::ViewEvent>& events) {
  using namespace snsmq;
  const std::size_t n = g.node_count();
  const double c1 = e.c_ref * e.delta, r1 = c1 * e.mu, c2 = c1 * e.delta, r2 = c2 * e.mu;

  std::vector<double> psych(n, 0.0);
  std::vector<std::uint64_t> views_made(n), views_recv(n), com_made(n), com_recv(n), meta_made(n), meta_recv(n);
  for (const auto& ev : events) {
    if (!g.has_edge(ev.poster, ev.viewer)) return "view between non-neighbors";
    if (t.agents[ev.poster].posts == 0) return "view of an item that was never posted";
    psych[ev.viewer] += e.c_ref * st[ev.poster].q * e.mu;
    ++views_made[ev.viewer];
    ++views_recv[ev.poster];
    if (ev.commented) {
      ++com_made[ev.viewer];
      ++com_recv[ev.poster];
    }
    if (ev.meta) {
      if (!ev.commented) return "meta-comment without a comment";
      ++meta_made[ev.poster];
      ++meta_recv[ev.viewer];
    }
  }

  std::uint64_t posts = 0, views = 0, metas = 0;
  double money = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    const auto& a = t.agents[i];
    const auto who = " (agent " + std::to_string(i) + ")";
    posts += a.posts;
    views += a.views_received;
    metas += a.metas_made;
    money += a.money;
    if (a.posts > 1) return "more than one post per game" + who;
    if (a.views_made != views_made[i] || a.views_received != views_recv[i] || a.comments_made != com_made[i] ||
        a.comments_received != com_recv[i] || a.metas_made != meta_made[i] || a.metas_received != meta_recv[i])
      return "counter disagrees with event log" + who;
    const double cost = e.c_ref * st[i].q * static_cast<double>(a.posts) +
                        c1 * static_cast<double>(a.comments_made) + c2 * static_cast<double>(a.metas_made);
    if (cost != a.cost) return "cost identity broken" + who;
    const double r = psych[i] + r1 * static_cast<double>(a.comments_received) +
                     r2 * static_cast<double>(a.metas_received);
    if (r != a.psych) return "psych identity broken" + who;
    if (a.comments_made > a.views_made) return "comments exceed views" + who;
    if (a.metas_made > a.comments_received) return "metas exceed received comments" + who;
    if (a.posts == 0 && a.views_received != 0) return "views of a non-poster" + who;
    if (a.psych < 0 || a.money < 0 || a.cost < 0) return "negative accumulator" + who;
  }
  double trigger = 0.0;
  switch (scheme.scheme) {
    case Scheme::S0: trigger = 0; break;
    case Scheme::S1: trigger = static_cast<double>(posts); break;
    case Scheme::S2: trigger = static_cast<double>(views); break;
    case Scheme::S3: trigger = static_cast<double>(metas); break;
  }
  if (money != scheme.payout() * trigger) return "monetary identity broken";
  return {};
}

/// Random dyadic test setup: graph, lattice strategies, scheme with pi = k/8,
/// and an economy drawn from dyadic values.
struct Setup {
  snsmq::Graph graph;
  std::vector<snsmq::StrategyParams> strategies;
  snsmq::SchemeConfig scheme;
  snsmq::EconomyConfig economy;
};

inline Setup random_setup(snsmq::Rng& rng) {
  using namespace snsmq;
  Setup s;
  const std::size_t n = 2 + rng.below(60);
  s.graph = generate_conn({n, rng.uniform(), rng()});
  s.strategies.resize(n);
  for (auto& st : s.strategies) st = decode(Genome(static_cast<std::uint16_t>(rng.below(Genome::kCount))));
  s.scheme = {static_cast<Scheme>(rng.below(4)), static_cast<double>(rng.below(81)) / 8.0};
  const double c_refs[] = {0.5, 1.0, 2.0};
  const double mus[] = {0.0, 2.0, 8.0};
  const double deltas[] = {0.0, 0.25, 0.5, 1.0};
  s.economy = {c_refs[rng.below(3)], mus[rng.below(3)], deltas[rng.below(4)], 0.125};
  return s;
}

}  // namespace accounting
