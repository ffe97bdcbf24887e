#include "snsmq/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

namespace snsmq {

namespace {

constexpr std::uint64_t kTagNetwork = 0x6e6574;      // "net"
constexpr std::uint64_t kTagProfiles = 0x70726f66;   // "prof"
constexpr std::uint64_t kTagEpisode = 0x657069;      // "epi"
constexpr std::uint64_t kTagCellNetwork = 0x636e6574;
constexpr std::uint64_t kTagCellProfiles = 0x6370726f;

std::size_t pi_slot(const ExperimentPlan& plan, const Cell& cell) {
  if (cell.scheme == Scheme::S0) return plan.pi_values.size();
  for (std::size_t k = 0; k < plan.pi_values.size(); ++k)
    if (plan.pi_values[k] == cell.pi) return k;
  throw StructureError("cell pi not in plan");
}

}  // namespace

void ExperimentPlan::validate() const {
  if (schemes.empty()) throw ConfigError("plan needs at least one scheme");
  if (pi_values.empty()) throw ConfigError("plan needs at least one pi value");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  for (double pi : pi_values)
    if (!(pi >= 0.0) || !std::isfinite(pi)) throw ConfigError("pi values must be finite and >= 0");
  if (std::set<double>(pi_values.begin(), pi_values.end()).size() != pi_values.size())
    throw ConfigError("duplicate pi values");
  if (std::set<Scheme>(schemes.begin(), schemes.end()).size() != schemes.size())
    throw ConfigError("duplicate schemes");
  ConnConfig{population.n, u, 0}.validate();
  if (population.n_alpha > population.n) throw ConfigError("n_alpha exceeds n");
  economy.validate();
  if (evolver == Evolver::mwga) evolution.validate();
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

std::vector<double> default_pi_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 50; ++k) grid.push_back(k / 5.0);
  return grid;
}

std::vector<Cell> enumerate_cells(const ExperimentPlan& plan) {
  std::vector<Cell> cells;
  const std::uint64_t slots = plan.pi_values.size() + 1;
  for (Scheme s : plan.schemes) {
    std::vector<double> pis = s == Scheme::S0 ? std::vector<double>{0.0} : plan.pi_values;
    for (double pi : pis) {
      for (std::size_t r = 0; r < plan.runs; ++r) {
        Cell c{s, pi, r, 0};
        c.index = (static_cast<std::uint64_t>(s) * slots + pi_slot(plan, c)) * plan.runs + r;
        cells.push_back(c);
      }
    }
  }
  return cells;
}

CellSeeds cell_seeds(const ExperimentPlan& plan, const Cell& cell) {
  CellSeeds s{};
  if (plan.fresh_network_per_cell) {
    s.network = derive_seed(derive_seed(plan.base_seed, kTagCellNetwork), cell.index);
    s.profiles = derive_seed(derive_seed(plan.base_seed, kTagCellProfiles), cell.index);
  } else {
    s.network = derive_seed(derive_seed(plan.base_seed, kTagNetwork), cell.run);
    s.profiles = derive_seed(derive_seed(plan.base_seed, kTagProfiles), cell.run);
  }
  s.episode = derive_seed(derive_seed(plan.base_seed, kTagEpisode), cell.index);
  return s;
}

ActivityTotals activity_totals(const RunRecord& record) {
  ActivityTotals t;
  for (const auto& a : record.agents) {
    t.items += a.tally.posts;
    t.views += a.tally.views_received;
    t.comments += a.tally.comments_made;
    t.metas += a.tally.metas_made;
    t.money += a.tally.money;
  }
  return t;
}

namespace {

RunRecord build_record(const Cell& cell, const Graph& graph, std::span<const AgentProfile> profiles,
                       const EpisodeResult& episode, double q_min) {
  RunRecord rec;
  rec.run = cell.run;
  rec.scheme = cell.scheme;
  rec.pi = cell.pi;
  rec.series = episode.series;
  rec.agents.resize(graph.node_count());
  for (NodeId i = 0; i < graph.node_count(); ++i) {
    auto& a = rec.agents[i];
    const auto p = decode(episode.final_genomes[i]);
    a.id = i;
    a.degree = graph.degree(i);
    a.group = profiles[i].group;
    a.b = p.b;
    a.l = p.l;
    a.q = p.q;
    a.p0 = post_probability(p.b, p.q, q_min);
    a.tally = episode.final_tally.agents[i];
  }
  rec.activity = activity_totals(rec);
  return rec;
}

}  // namespace

RunRecord run_cell(const ExperimentPlan& plan, const Cell& cell) {
  const auto seeds = cell_seeds(plan, cell);
  const Graph graph = generate_conn(ConnConfig{plan.population.n, plan.u, seeds.network});
  Rng profile_rng(seeds.profiles);
  const auto profiles = make_profiles(plan.population.n, plan.population.n_alpha, plan.population.mode, profile_rng);
  Rng rng(seeds.episode);
  const SchemeConfig scheme{cell.scheme, cell.pi};
  const EpisodeResult episode =
      plan.evolver == Evolver::mwga
          ? run_episode(graph, profiles, scheme, plan.economy, plan.evolution, rng)
          : run_episode_naive_ga(graph, profiles, scheme, plan.economy, plan.evolution, rng);
  return build_record(cell, graph, profiles, episode, plan.economy.q_min);
}

PlanOutcome run_plan(const ExperimentPlan& plan, const ProgressFn& progress) {
  plan.validate();
  const auto cells = enumerate_cells(plan);
  std::vector<std::optional<RunRecord>> slots(cells.size());
  std::vector<std::optional<std::string>> errors(cells.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      try {
        slots[k] = run_cell(plan, cells[k]);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(cells[k], ++done, cells.size());
      }
    }
  };

  const std::size_t threads = std::min(plan.jobs, cells.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  PlanOutcome out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (slots[k]) out.records.push_back(std::move(*slots[k]));
    if (errors[k]) out.failures.push_back({cells[k], *errors[k]});
  }
  return out;
}

std::string_view to_string(Subset s) {
  switch (s) {
    case Subset::alpha_h: return "alpha_h";
    case Subset::alpha_l: return "alpha_l";
    case Subset::beta_h: return "beta_h";
    case Subset::beta_l: return "beta_l";
  }
  return "?";
}

Subset subset_of(Group g, std::size_t degree, std::size_t threshold) {
  const bool high = degree >= threshold;
  if (g == Group::alpha) return high ? Subset::alpha_h : Subset::alpha_l;
  return high ? Subset::beta_h : Subset::beta_l;
}

namespace {

// (scheme, pi) keys in first-appearance order
std::vector<std::pair<Scheme, double>> cell_keys(std::span<const RunRecord> records) {
  std::vector<std::pair<Scheme, double>> keys;
  for (const auto& r : records) {
    std::pair<Scheme, double> k{r.scheme, r.pi};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  return keys;
}

}  // namespace

std::vector<StratumRow> stratify(std::span<const RunRecord> records, std::size_t degree_threshold) {
  std::vector<StratumRow> rows;
  for (auto [scheme, pi] : cell_keys(records)) {
    std::array<GroupMeans, 4> acc{};
    for (const auto& r : records) {
      if (r.scheme != scheme || r.pi != pi) continue;
      for (const auto& a : r.agents) {
        auto& m = acc[static_cast<std::size_t>(subset_of(a.group, a.degree, degree_threshold))];
        ++m.count;
        m.b += a.b;
        m.l += a.l;
        m.q += a.q;
        m.p0 += a.p0;
      }
    }
    for (std::size_t s = 0; s < acc.size(); ++s) {
      StratumRow row{scheme, pi, static_cast<Subset>(s), acc[s].count, std::nullopt};
      if (acc[s].count > 0) {
        GroupMeans m = acc[s];
        const double c = static_cast<double>(m.count);
        m.b /= c;
        m.l /= c;
        m.q /= c;
        m.p0 /= c;
        row.means = m;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

struct MeanActivity {
  double items = 0, views = 0, comments = 0, metas = 0, k_bar = 0;
};

MeanActivity mean_activity(std::span<const RunRecord> records) {
  MeanActivity m;
  for (const auto& r : records) {
    m.items += static_cast<double>(r.activity.items);
    m.views += static_cast<double>(r.activity.views);
    m.comments += static_cast<double>(r.activity.comments);
    m.metas += static_cast<double>(r.activity.metas);
    m.k_bar += r.agents.empty() ? 0.0 : r.activity.money / static_cast<double>(r.agents.size());
  }
  const double c = static_cast<double>(records.size());
  m.items /= c;
  m.views /= c;
  m.comments /= c;
  m.metas /= c;
  m.k_bar /= c;
  return m;
}

}  // namespace

EffectivenessRecord pi_effectiveness(std::span<const RunRecord> at_pi, std::span<const RunRecord> at_zero,
                                     Scheme scheme) {
  EffectivenessRecord e;
  e.scheme = scheme;
  if (at_pi.empty()) return e;
  e.pi = at_pi.front().pi;
  const auto now = mean_activity(at_pi);
  e.k_bar = now.k_bar;
  if (e.pi == 0.0 || e.k_bar == 0.0 || at_zero.empty()) return e;
  const auto base = mean_activity(at_zero);
  e.e_item = (now.items - base.items) / e.k_bar;
  e.e_view = (now.views - base.views) / e.k_bar;
  e.e_comm = (now.comments - base.comments) / e.k_bar;
  e.e_meta = (now.metas - base.metas) / e.k_bar;
  return e;
}

std::vector<EffectivenessRecord> effectiveness_table(std::span<const RunRecord> records) {
  auto select = [&](Scheme s, double pi) {
    std::vector<RunRecord> out;
    for (const auto& r : records)
      if (r.scheme == s && r.pi == pi) out.push_back(r);
    return out;
  };
  std::vector<EffectivenessRecord> table;
  for (auto [scheme, pi] : cell_keys(records)) {
    if (scheme == Scheme::S0) continue;
    auto baseline = select(scheme, 0.0);
    if (baseline.empty()) baseline = select(Scheme::S0, 0.0);
    table.push_back(pi_effectiveness(select(scheme, pi), baseline, scheme));
  }
  return table;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw StructureError("spearman: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::optional<double> degree_correlation(const RunRecord& record, Group group, Param param) {
  std::vector<double> deg, val;
  for (const auto& a : record.agents) {
    if (a.group != group) continue;
    deg.push_back(static_cast<double>(a.degree));
    switch (param) {
      case Param::b: val.push_back(a.b); break;
      case Param::l: val.push_back(a.l); break;
      case Param::q: val.push_back(a.q); break;
      case Param::p0: val.push_back(a.p0); break;
    }
  }
  return spearman(deg, val);
}

}  // namespace snsmq
