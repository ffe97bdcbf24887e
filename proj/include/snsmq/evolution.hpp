#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "snsmq/game.hpp"
#include "snsmq/genome.hpp"
#include "snsmq/network.hpp"
#include "snsmq/rng.hpp"

namespace snsmq {

struct EvolutionConfig {
  std::size_t w = 10;           // worlds, the last one is the test world
  std::size_t n_gen = 4;        // games per generation
  std::size_t g = 1000;         // generations per episode
  double m = 0.01;              // per-bit mutation probability
  double epsilon = 1e-5;        // selection smoothing
  bool mutate_test_world = true;

  void validate() const;
};

enum class Evolver : std::uint8_t { mwga, naive_ga };

std::string_view to_string(Evolver e);
Evolver parse_evolver(std::string_view s);

/// W strategy worlds over one graph plus the fitness accumulated in the
/// current generation. worlds[w-1] is the test world.
struct MultiWorldState {
  std::vector<std::vector<Genome>> worlds;
  std::vector<std::vector<double>> fitness;
  std::size_t generation = 0;

  std::size_t world_count() const { return worlds.size(); }
  std::size_t agent_count() const { return worlds.empty() ? 0 : worlds.front().size(); }

  static MultiWorldState uniform(std::size_t w, std::size_t n, Genome g);
  static MultiWorldState random(std::size_t w, std::size_t n, Rng& rng);
};

std::vector<StrategyParams> decode_all(std::span<const Genome> genomes);

/// Plays n_gen games in every world and adds each agent's per-game utility
/// to state.fitness. World l draws from its own stream derived from one word
/// of `rng`, so worlds are independent of evaluation order. Returns the
/// summed tally of every world over the generation.
std::vector<GameTally> play_generation(MultiWorldState& state, const Graph& graph,
                                       std::span<const AgentProfile> profiles, const SchemeConfig& scheme,
                                       const EconomyConfig& economy, const EvolutionConfig& config, Rng& rng);

/// Builds the next generation from the fitness in `state`.
///
/// Worlds 0..W-2: each agent crosses with one sibling drawn by squared-
/// advantage roulette over its W-1 siblings (test world included), then
/// mutates. Test world: the sibling genome with the highest fitness, lowest
/// world index on ties, mutated only if config.mutate_test_world. Children
/// replace parents synchronously; fitness of the result is zero.
MultiWorldState select_next(const MultiWorldState& state, const EvolutionConfig& config, Rng& rng);

/// play_generation followed by select_next.
MultiWorldState step_generation(const MultiWorldState& state, const Graph& graph,
                                std::span<const AgentProfile> profiles, const SchemeConfig& scheme,
                                const EconomyConfig& economy, const EvolutionConfig& config, Rng& rng);

struct GroupMeans {
  std::size_t count = 0;
  double b = 0.0, l = 0.0, q = 0.0, p0 = 0.0;

  friend bool operator==(const GroupMeans&, const GroupMeans&) = default;
};

struct GenerationSummary {
  std::size_t generation = 0;
  GroupMeans alpha;
  GroupMeans beta;

  friend bool operator==(const GenerationSummary&, const GenerationSummary&) = default;
};

GenerationSummary summarize(std::size_t generation, std::span<const Genome> genomes,
                            std::span<const AgentProfile> profiles, double q_min);

struct EpisodeResult {
  /// Strategies played by the reported world in the final generation.
  std::vector<Genome> final_genomes;
  std::vector<GenerationSummary> series;
  /// Events of the reported world summed over the final generation's games.
  GameTally final_tally;

  friend bool operator==(const EpisodeResult& a, const EpisodeResult& b) {
    return a.final_genomes == b.final_genomes && a.series == b.series &&
           a.final_tally.agents == b.final_tally.agents;
  }
};

/// Multiple-world GA episode from uniformly random genomes. Reports the test world.
EpisodeResult run_episode(const Graph& graph, std::span<const AgentProfile> profiles, const SchemeConfig& scheme,
                          const EconomyConfig& economy, const EvolutionConfig& config, Rng& rng);

/// Same, starting from a caller-provided state.
EpisodeResult run_episode_from(MultiWorldState state, const Graph& graph, std::span<const AgentProfile> profiles,
                               const SchemeConfig& scheme, const EconomyConfig& economy,
                               const EvolutionConfig& config, Rng& rng);

/// One naive-GA generation on a single world: each agent crosses with a
/// neighbor drawn by squared-advantage roulette over neighbor fitness, then
/// mutates. Agents without neighbors only mutate.
std::vector<Genome> naive_select_next(std::span<const Genome> genomes, std::span<const double> fitness,
                                      const Graph& graph, const EvolutionConfig& config, Rng& rng);

/// Single-world GA baseline. config.w is ignored.
EpisodeResult run_episode_naive_ga(const Graph& graph, std::span<const AgentProfile> profiles,
                                   const SchemeConfig& scheme, const EconomyConfig& economy,
                                   const EvolutionConfig& config, Rng& rng);

EpisodeResult run_episode_naive_ga_from(std::vector<Genome> genomes, const Graph& graph,
                                        std::span<const AgentProfile> profiles, const SchemeConfig& scheme,
                                        const EconomyConfig& economy, const EvolutionConfig& config, Rng& rng);

}  // namespace snsmq
