#include "snsmq/game.hpp"

#include <numeric>

namespace snsmq {

std::string_view to_string(Group g) { return g == Group::alpha ? "alpha" : "beta"; }

std::string_view to_string(PreferenceMode m) { return m == PreferenceMode::fixed ? "fixed" : "half-uniform"; }

PreferenceMode parse_preference_mode(std::string_view s) {
  if (s == "half-uniform") return PreferenceMode::half_uniform;
  if (s == "fixed") return PreferenceMode::fixed;
  throw ConfigError("unknown preference mode '" + std::string(s) + "' (expected half-uniform|fixed)");
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::S0: return "S0";
    case Scheme::S1: return "S1";
    case Scheme::S2: return "S2";
    case Scheme::S3: return "S3";
  }
  return "?";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "S0" || s == "s0") return Scheme::S0;
  if (s == "S1" || s == "s1") return Scheme::S1;
  if (s == "S2" || s == "s2") return Scheme::S2;
  if (s == "S3" || s == "s3") return Scheme::S3;
  throw ConfigError("unknown scheme '" + std::string(s) + "' (expected S0|S1|S2|S3)");
}

std::vector<AgentProfile> make_profiles(std::size_t n, std::size_t n_alpha, PreferenceMode mode, Rng& rng) {
  if (n_alpha > n) throw ConfigError("n_alpha exceeds the number of agents");
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::vector<AgentProfile> profiles(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const NodeId id = order[rank];
    const bool alpha = rank < n_alpha;
    double m = 0.0;
    if (mode == PreferenceMode::fixed) {
      m = alpha ? 0.25 : 0.75;
    } else {
      m = alpha ? 0.5 * rng.uniform() : 0.5 + 0.5 * rng.uniform();
    }
    profiles[id] = AgentProfile{id, m, group_for(m)};
  }
  return profiles;
}

void EconomyConfig::validate() const {
  if (!(c_ref > 0.0)) throw ConfigError("c_ref must be positive");
  if (!(mu >= 0.0)) throw ConfigError("mu must be non-negative");
  if (!(delta >= 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in [0, 1]");
  if (!(q_min > 0.0 && q_min <= 1.0)) throw ConfigError("q_min must lie in (0, 1]");
}

StageCosts stage_costs(const EconomyConfig& e, double q) {
  StageCosts s{};
  s.c0 = e.c_ref * q;
  s.r0 = s.c0 * e.mu;
  s.c1 = e.c_ref * e.delta;
  s.r1 = s.c1 * e.mu;
  s.c2 = s.c1 * e.delta;
  s.r2 = s.c2 * e.mu;
  return s;
}

double post_probability(double b, double q, double q_min) {
  if (q < q_min) throw DomainError("quality below q_min");
  return b * q_min / q;
}

double view_probability(double q_poster, std::size_t s_j) {
  return s_j == 0 ? 0.0 : q_poster / static_cast<double>(s_j);
}

AgentTally& AgentTally::operator+=(const AgentTally& o) {
  psych += o.psych;
  money += o.money;
  cost += o.cost;
  posts += o.posts;
  views_received += o.views_received;
  views_made += o.views_made;
  comments_received += o.comments_received;
  comments_made += o.comments_made;
  metas_made += o.metas_made;
  metas_received += o.metas_received;
  return *this;
}

GameTally& GameTally::operator+=(const GameTally& o) {
  if (o.agents.size() != agents.size()) throw StructureError("tally size mismatch");
  for (std::size_t i = 0; i < agents.size(); ++i) agents[i] += o.agents[i];
  return *this;
}

ActivityTotals GameTally::totals() const {
  ActivityTotals t;
  for (const auto& a : agents) {
    t.items += a.posts;
    t.views += a.views_received;
    t.comments += a.comments_made;
    t.metas += a.metas_made;
    t.money += a.money;
  }
  return t;
}

void play_game_into(const Graph& graph, std::span<const StrategyParams> strategies, const SchemeConfig& scheme,
                    const EconomyConfig& economy, Rng& rng, GameTally& tally, std::vector<ViewEvent>* events) {
  const std::size_t n = graph.node_count();
  if (strategies.size() != n) throw StructureError("strategy count does not match graph size");
  if (tally.agents.size() != n) throw StructureError("tally size does not match graph size");

  const double pi = scheme.payout();
  const StageCosts fixed = stage_costs(economy, 1.0);  // c1, r1, c2, r2 do not depend on q

  // stage 1: simultaneous post decisions
  std::vector<char> posted(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    const auto& s = strategies[i];
    if (!rng.bernoulli(post_probability(s.b, s.q, economy.q_min))) continue;
    posted[i] = 1;
    auto& t = tally.agents[i];
    ++t.posts;
    t.cost += economy.c_ref * s.q;
    if (scheme.scheme == Scheme::S1) t.money += pi;
  }

  std::vector<std::uint32_t> items_seen(n, 0);  // s_j
  for (NodeId j = 0; j < n; ++j)
    for (NodeId i : graph.neighbors(j)) items_seen[j] += posted[i];

  // stages 2 and 3, per (poster, viewer) pair
  for (NodeId i = 0; i < n; ++i) {
    if (!posted[i]) continue;
    const auto& poster = strategies[i];
    const double r0 = economy.c_ref * poster.q * economy.mu;
    const double p_meta = poster.l * poster.q;
    auto& ti = tally.agents[i];
    for (NodeId j : graph.neighbors(i)) {
      if (!rng.bernoulli(view_probability(poster.q, items_seen[j]))) continue;
      ViewEvent* ev = nullptr;
      if (events) ev = &events->emplace_back(ViewEvent{i, j, false, false});
      auto& tj = tally.agents[j];
      ++ti.views_received;
      ++tj.views_made;
      tj.psych += r0;
      if (scheme.scheme == Scheme::S2) ti.money += pi;

      if (!rng.bernoulli(strategies[j].l * poster.q)) continue;
      if (ev) ev->commented = true;
      ++tj.comments_made;
      tj.cost += fixed.c1;
      ++ti.comments_received;
      ti.psych += fixed.r1;

      if (!rng.bernoulli(p_meta)) continue;
      if (ev) ev->meta = true;
      ++ti.metas_made;
      ti.cost += fixed.c2;
      ++tj.metas_received;
      tj.psych += fixed.r2;
      if (scheme.scheme == Scheme::S3) ti.money += pi;
    }
  }
}

GameTally play_game(const Graph& graph, std::span<const AgentProfile> profiles,
                    std::span<const StrategyParams> strategies, const SchemeConfig& scheme,
                    const EconomyConfig& economy, Rng& rng) {
  if (profiles.size() != graph.node_count()) throw StructureError("profile count does not match graph size");
  GameTally tally(graph.node_count());
  play_game_into(graph, strategies, scheme, economy, rng, tally);
  return tally;
}

}  // namespace snsmq
