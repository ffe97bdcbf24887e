#include "snsmq/evolution.hpp"

#include <algorithm>

namespace snsmq {

void EvolutionConfig::validate() const {
  if (w < 2) throw ConfigError("world count w must be >= 2");
  if (n_gen < 1) throw ConfigError("n_gen must be >= 1");
  if (g < 1) throw ConfigError("generation count g must be >= 1");
  if (!(m >= 0.0 && m <= 1.0)) throw ConfigError("mutation probability m must lie in [0, 1]");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
}

std::string_view to_string(Evolver e) { return e == Evolver::naive_ga ? "naive-ga" : "mwga"; }

Evolver parse_evolver(std::string_view s) {
  if (s == "mwga") return Evolver::mwga;
  if (s == "naive-ga") return Evolver::naive_ga;
  throw ConfigError("unknown evolver '" + std::string(s) + "' (expected mwga|naive-ga)");
}

MultiWorldState MultiWorldState::uniform(std::size_t w, std::size_t n, Genome g) {
  MultiWorldState s;
  s.worlds.assign(w, std::vector<Genome>(n, g));
  s.fitness.assign(w, std::vector<double>(n, 0.0));
  return s;
}

MultiWorldState MultiWorldState::random(std::size_t w, std::size_t n, Rng& rng) {
  MultiWorldState s = uniform(w, n, Genome{});
  for (auto& world : s.worlds)
    for (auto& genome : world) genome = Genome(static_cast<std::uint16_t>(rng.below(Genome::kCount)));
  return s;
}

std::vector<StrategyParams> decode_all(std::span<const Genome> genomes) {
  std::vector<StrategyParams> out(genomes.size());
  std::transform(genomes.begin(), genomes.end(), out.begin(), decode);
  return out;
}

namespace {

void check_inputs(const Graph& graph, std::span<const AgentProfile> profiles, std::size_t agents,
                  const EconomyConfig& economy) {
  if (profiles.size() != graph.node_count() || agents != graph.node_count())
    throw StructureError("genome/profile arrays do not match graph size");
  economy.validate();
  if (economy.q_min > 1.0 / 8.0) throw ConfigError("q_min above 1/8 leaves part of the genome lattice illegal");
}

// Plays n_gen games with fixed strategies; adds per-game utility to fitness
// and returns the summed tally.
GameTally play_world(const Graph& graph, std::span<const AgentProfile> profiles,
                     std::span<const StrategyParams> strategies, const SchemeConfig& scheme,
                     const EconomyConfig& economy, std::size_t n_gen, Rng& rng, std::span<double> fitness) {
  const std::size_t n = graph.node_count();
  GameTally total(n);
  GameTally game(n);
  for (std::size_t k = 0; k < n_gen; ++k) {
    game.reset();
    play_game_into(graph, strategies, scheme, economy, rng, game);
    for (std::size_t i = 0; i < n; ++i) fitness[i] += utility(game.agents[i], profiles[i].m_pref);
    total += game;
  }
  return total;
}

}  // namespace

std::vector<GameTally> play_generation(MultiWorldState& state, const Graph& graph,
                                       std::span<const AgentProfile> profiles, const SchemeConfig& scheme,
                                       const EconomyConfig& economy, const EvolutionConfig& config, Rng& rng) {
  check_inputs(graph, profiles, state.agent_count(), economy);
  const std::uint64_t key = rng();
  std::vector<GameTally> tallies;
  tallies.reserve(state.world_count());
  for (std::size_t l = 0; l < state.world_count(); ++l) {
    Rng world_rng(derive_seed(key, l));
    const auto strategies = decode_all(state.worlds[l]);
    tallies.push_back(
        play_world(graph, profiles, strategies, scheme, economy, config.n_gen, world_rng, state.fitness[l]));
  }
  return tallies;
}

MultiWorldState select_next(const MultiWorldState& state, const EvolutionConfig& config, Rng& rng) {
  const std::size_t w = state.world_count();
  const std::size_t n = state.agent_count();
  if (w < 2) throw StructureError("multi-world state needs at least two worlds");
  MultiWorldState next = MultiWorldState::uniform(w, n, Genome{});
  next.generation = state.generation + 1;

  std::vector<double> sibling_fitness(w - 1);
  std::vector<std::size_t> sibling_world(w - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l + 1 < w; ++l) {
      std::size_t k = 0;
      for (std::size_t o = 0; o < w; ++o) {
        if (o == l) continue;
        sibling_fitness[k] = state.fitness[o][i];
        sibling_world[k] = o;
        ++k;
      }
      const std::size_t pick = sibling_world[select_parent(sibling_fitness, config.epsilon, rng)];
      const Genome child = uniform_crossover(state.worlds[l][i], state.worlds[pick][i], rng);
      next.worlds[l][i] = mutate(child, config.m, rng);
    }
  }

  // test world: elite sibling per agent
  const std::size_t test = w - 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t l = 1; l < w; ++l)
      if (state.fitness[l][i] > state.fitness[best][i]) best = l;
    next.worlds[test][i] = state.worlds[best][i];
    if (config.mutate_test_world) next.worlds[test][i] = mutate(next.worlds[test][i], config.m, rng);
  }
  return next;
}

MultiWorldState step_generation(const MultiWorldState& state, const Graph& graph,
                                std::span<const AgentProfile> profiles, const SchemeConfig& scheme,
                                const EconomyConfig& economy, const EvolutionConfig& config, Rng& rng) {
  config.validate();
  MultiWorldState played = state;
  for (auto& f : played.fitness) std::fill(f.begin(), f.end(), 0.0);
  play_generation(played, graph, profiles, scheme, economy, config, rng);
  return select_next(played, config, rng);
}

GenerationSummary summarize(std::size_t generation, std::span<const Genome> genomes,
                            std::span<const AgentProfile> profiles, double q_min) {
  GenerationSummary s;
  s.generation = generation;
  for (std::size_t i = 0; i < genomes.size(); ++i) {
    const auto p = decode(genomes[i]);
    auto& m = profiles[i].group == Group::alpha ? s.alpha : s.beta;
    ++m.count;
    m.b += p.b;
    m.l += p.l;
    m.q += p.q;
    m.p0 += post_probability(p.b, p.q, q_min);
  }
  for (auto* m : {&s.alpha, &s.beta}) {
    if (m->count == 0) continue;
    const double c = static_cast<double>(m->count);
    m->b /= c;
    m->l /= c;
    m->q /= c;
    m->p0 /= c;
  }
  return s;
}

EpisodeResult run_episode(const Graph& graph, std::span<const AgentProfile> profiles, const SchemeConfig& scheme,
                          const EconomyConfig& economy, const EvolutionConfig& config, Rng& rng) {
  config.validate();
  const std::uint64_t key = rng();
  Rng init(derive_seed(key, 0));
  auto state = MultiWorldState::random(config.w, graph.node_count(), init);
  Rng evolve(derive_seed(key, 1));
  return run_episode_from(std::move(state), graph, profiles, scheme, economy, config, evolve);
}

EpisodeResult run_episode_from(MultiWorldState state, const Graph& graph, std::span<const AgentProfile> profiles,
                               const SchemeConfig& scheme, const EconomyConfig& economy,
                               const EvolutionConfig& config, Rng& rng) {
  config.validate();
  if (state.world_count() != config.w) throw StructureError("state world count does not match config.w");
  EpisodeResult result;
  result.series.reserve(config.g);
  const std::size_t test = config.w - 1;
  for (std::size_t t = 0; t < config.g; ++t) {
    for (auto& f : state.fitness) std::fill(f.begin(), f.end(), 0.0);
    auto tallies = play_generation(state, graph, profiles, scheme, economy, config, rng);
    result.series.push_back(summarize(t, state.worlds[test], profiles, economy.q_min));
    if (t + 1 == config.g) {
      result.final_genomes = state.worlds[test];
      result.final_tally = std::move(tallies[test]);
      break;
    }
    state = select_next(state, config, rng);
  }
  return result;
}

std::vector<Genome> naive_select_next(std::span<const Genome> genomes, std::span<const double> fitness,
                                      const Graph& graph, const EvolutionConfig& config, Rng& rng) {
  const std::size_t n = graph.node_count();
  if (genomes.size() != n || fitness.size() != n) throw StructureError("genome/fitness arrays do not match graph");
  std::vector<Genome> next(n);
  std::vector<double> neighbor_fitness;
  for (NodeId i = 0; i < n; ++i) {
    const auto nbrs = graph.neighbors(i);
    Genome child = genomes[i];
    if (!nbrs.empty()) {
      neighbor_fitness.resize(nbrs.size());
      for (std::size_t k = 0; k < nbrs.size(); ++k) neighbor_fitness[k] = fitness[nbrs[k]];
      const NodeId mate = nbrs[select_parent(neighbor_fitness, config.epsilon, rng)];
      child = uniform_crossover(genomes[i], genomes[mate], rng);
    }
    next[i] = mutate(child, config.m, rng);
  }
  return next;
}

EpisodeResult run_episode_naive_ga(const Graph& graph, std::span<const AgentProfile> profiles,
                                   const SchemeConfig& scheme, const EconomyConfig& economy,
                                   const EvolutionConfig& config, Rng& rng) {
  const std::uint64_t key = rng();
  Rng init(derive_seed(key, 0));
  std::vector<Genome> genomes(graph.node_count());
  for (auto& g : genomes) g = Genome(static_cast<std::uint16_t>(init.below(Genome::kCount)));
  Rng evolve(derive_seed(key, 1));
  return run_episode_naive_ga_from(std::move(genomes), graph, profiles, scheme, economy, config, evolve);
}

EpisodeResult run_episode_naive_ga_from(std::vector<Genome> genomes, const Graph& graph,
                                        std::span<const AgentProfile> profiles, const SchemeConfig& scheme,
                                        const EconomyConfig& economy, const EvolutionConfig& config, Rng& rng) {
  if (config.n_gen < 1 || config.g < 1 || !(config.m >= 0.0 && config.m <= 1.0) || !(config.epsilon > 0.0))
    throw ConfigError("invalid evolution config");
  check_inputs(graph, profiles, genomes.size(), economy);
  EpisodeResult result;
  result.series.reserve(config.g);
  std::vector<double> fitness(graph.node_count());
  for (std::size_t t = 0; t < config.g; ++t) {
    std::fill(fitness.begin(), fitness.end(), 0.0);
    Rng games(derive_seed(rng(), 0));
    const auto strategies = decode_all(genomes);
    auto tally = play_world(graph, profiles, strategies, scheme, economy, config.n_gen, games, fitness);
    result.series.push_back(summarize(t, genomes, profiles, economy.q_min));
    if (t + 1 == config.g) {
      result.final_genomes = genomes;
      result.final_tally = std::move(tally);
      break;
    }
    genomes = naive_select_next(genomes, fitness, graph, config, rng);
  }
  return result;
}

}  // namespace snsmq
