#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snsmq/evolution.hpp"
#include "snsmq/game.hpp"
#include "snsmq/network.hpp"

namespace snsmq {

struct Population {
  std::size_t n = 400;
  std::size_t n_alpha = 200;
  PreferenceMode mode = PreferenceMode::half_uniform;
};

struct ExperimentPlan {
  std::vector<Scheme> schemes{Scheme::S0};
  std::vector<double> pi_values{1.0};
  std::size_t runs = 100;
  std::uint64_t base_seed = 1;
  double u = 0.9;  // CoNN conversion probability; node count comes from population.n
  EconomyConfig economy;
  EvolutionConfig evolution;
  Population population;
  std::size_t degree_threshold = 50;
  Evolver evolver = Evolver::mwga;
  bool fresh_network_per_cell = false;
  std::size_t jobs = 1;

  void validate() const;
};

/// 0.0, 0.2, ..., 10.0
std::vector<double> default_pi_grid();

/// One (scheme, pi, run) simulation. S0 cells always carry pi = 0.
struct Cell {
  Scheme scheme = Scheme::S0;
  double pi = 0.0;
  std::size_t run = 0;
  std::uint64_t index = 0;  // unique counter within the plan, keys the episode seed
};

/// Cells in output order: schemes as listed, then pi as listed, then run.
/// S0 contributes a single pi = 0 column regardless of pi_values.
std::vector<Cell> enumerate_cells(const ExperimentPlan& plan);

struct CellSeeds {
  std::uint64_t network;
  std::uint64_t profiles;
  std::uint64_t episode;
};

/// Seeds for one cell. Episode seeds are derive_seed(derive_seed(base, tag),
/// cell.index), injective in the cell index. Network and profile seeds depend
/// on the run only, unless fresh networks per cell are requested.
CellSeeds cell_seeds(const ExperimentPlan& plan, const Cell& cell);

struct AgentRecord {
  NodeId id = 0;
  std::size_t degree = 0;
  Group group = Group::alpha;
  double b = 0.0, l = 0.0, q = 0.0, p0 = 0.0;
  AgentTally tally;  // final generation of the reported world
};

struct RunRecord {
  std::size_t run = 0;
  Scheme scheme = Scheme::S0;
  double pi = 0.0;
  std::vector<AgentRecord> agents;
  std::vector<GenerationSummary> series;
  ActivityTotals activity;
};

ActivityTotals activity_totals(const RunRecord& record);

/// Runs one cell end to end (network, profiles, episode).
RunRecord run_cell(const ExperimentPlan& plan, const Cell& cell);

struct CellFailure {
  Cell cell;
  std::string message;
};

struct PlanOutcome {
  std::vector<RunRecord> records;  // completed cells, in enumerate_cells order
  std::vector<CellFailure> failures;
};

using ProgressFn = std::function<void(const Cell&, std::size_t done, std::size_t total)>;

/// Executes every cell on up to plan.jobs threads. A failing cell is reported
/// in `failures` and leaves the other records intact.
PlanOutcome run_plan(const ExperimentPlan& plan, const ProgressFn& progress = {});

enum class Subset : std::uint8_t { alpha_h, alpha_l, beta_h, beta_l };

std::string_view to_string(Subset s);
Subset subset_of(Group g, std::size_t degree, std::size_t threshold);

struct StratumRow {
  Scheme scheme = Scheme::S0;
  double pi = 0.0;
  Subset subset = Subset::alpha_h;
  std::size_t n_agents = 0;
  std::optional<GroupMeans> means;  // empty when the subset has no agents
};

/// Pooled means over every (run, agent) in each subset, per (scheme, pi) in
/// first-appearance order. Sums run in record order, then agent order.
std::vector<StratumRow> stratify(std::span<const RunRecord> records, std::size_t degree_threshold);

struct EffectivenessRecord {
  Scheme scheme = Scheme::S0;
  double pi = 0.0;
  double k_bar = 0.0;
  std::optional<double> e_item, e_view, e_comm, e_meta;
};

/// (N_act(pi) - N_act(0)) / K_bar(pi) with run-averaged final-generation
/// counts. All four values are missing when pi is 0, K_bar is 0 or a side
/// has no records.
EffectivenessRecord pi_effectiveness(std::span<const RunRecord> at_pi, std::span<const RunRecord> at_zero,
                                     Scheme scheme);

/// Effectiveness for every non-S0 (scheme, pi) group in `records`. The
/// baseline is the same scheme at pi = 0 when present, otherwise S0.
std::vector<EffectivenessRecord> effectiveness_table(std::span<const RunRecord> records);

/// Spearman rank correlation with average ranks for ties. Empty when fewer
/// than two points or either side is constant.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

enum class Param : std::uint8_t { b, l, q, p0 };

/// Rank correlation between degree and a strategy parameter within one group.
std::optional<double> degree_correlation(const RunRecord& record, Group group, Param param);

}  // namespace snsmq
