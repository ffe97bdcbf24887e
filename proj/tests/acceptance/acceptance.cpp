// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "accounting.hpp"
#include "event_tree.hpp"
#include "snsmq/csv.hpp"
#include "snsmq/evolution.hpp"
#include "snsmq/experiments.hpp"
#include "snsmq/genome.hpp"
#include "snsmq/network.hpp"

using namespace snsmq;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const char* name, const Verdict& v) {
  std::printf("%s  %-28s %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

// ---------------------------------------------------------------- exact suites

Verdict accounting_exactness() {
  Rng rng(2024);
  std::vector<ViewEvent> events;
  for (int k = 0; k < 10000; ++k) {
    const auto s = accounting::random_setup(rng);
    GameTally t(s.graph.node_count());
    events.clear();
    Rng game(rng());
    play_game_into(s.graph, s.strategies, s.scheme, s.economy, game, t, &events);
    if (auto msg = accounting::check(s.graph, s.strategies, s.scheme, s.economy, t, events); !msg.empty())
      return {false, fmt("game %d: %s", k, msg.c_str())};
  }
  return {true, "10000 random games, all identities exact"};
}

double field(const AgentTally& t, std::size_t k) {
  switch (k) {
    case 0: return t.psych;
    case 1: return t.money;
    case 2: return t.cost;
    case 3: return static_cast<double>(t.posts);
    case 4: return static_cast<double>(t.views_received);
    case 5: return static_cast<double>(t.views_made);
    case 6: return static_cast<double>(t.comments_received);
    case 7: return static_cast<double>(t.comments_made);
    case 8: return static_cast<double>(t.metas_made);
    default: return static_cast<double>(t.metas_received);
  }
}

struct OracleCase {
  std::size_t n;
  std::vector<std::pair<int, int>> edges;
  std::vector<Genome> genomes;
  Scheme scheme;
  double pi;
};

Verdict oracle_equivalence() {
  const std::vector<OracleCase> cases{
      {2, {{0, 1}}, {Genome::parse("111 111 000"), Genome::parse("101 110 011")}, Scheme::S1, 1.0},
      {2, {{0, 1}}, {Genome::parse("110 011 111"), Genome::parse("111 111 111")}, Scheme::S3, 2.0},
      {3, {{0, 1}, {1, 2}}, {Genome::parse("111 101 001"), Genome::parse("100 111 000"), Genome::parse("111 011 010")},
       Scheme::S2, 0.5},
      {3, {{0, 1}, {1, 2}, {0, 2}},
       {Genome::parse("111 111 010"), Genome::parse("110 100 000"), Genome::parse("101 111 001")}, Scheme::S3, 1.0},
      {3, {{0, 1}, {1, 2}, {0, 2}},
       {Genome::parse("111 110 000"), Genome::parse("111 111 011"), Genome::parse("011 101 100")}, Scheme::S0, 0.0},
  };
  const EconomyConfig eco{};
  const int games = 100000;
  double worst = 0.0;
  std::size_t compared = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& oc = cases[c];
    Graph g(oc.n);
    for (auto [a, b] : oc.edges) g.add_edge(static_cast<NodeId>(a), static_cast<NodeId>(b));
    std::vector<StrategyParams> st;
    std::vector<oracle::Strategy> ost;
    for (Genome x : oc.genomes) {
      st.push_back(decode(x));
      ost.push_back({st.back().b, st.back().l, st.back().q});
    }
    const auto exact = oracle::enumerate(oc.n, oc.edges, ost, static_cast<int>(oc.scheme), oc.pi,
                                         {eco.c_ref, eco.mu, eco.delta, eco.q_min});
    std::vector<std::array<double, oracle::kFields>> sum(oc.n);
    for (auto& s : sum) s.fill(0.0);
    Rng rng(derive_seed(77, c));
    GameTally t(oc.n);
    for (int k = 0; k < games; ++k) {
      t.reset();
      play_game_into(g, st, {oc.scheme, oc.pi}, eco, rng, t);
      for (std::size_t i = 0; i < oc.n; ++i)
        for (std::size_t f = 0; f < oracle::kFields; ++f) sum[i][f] += field(t.agents[i], f);
    }
    for (std::size_t i = 0; i < oc.n; ++i) {
      for (std::size_t f = 0; f < oracle::kFields; ++f) {
        const double mc = sum[i][f] / games;
        const double mean = exact[i][f].mean;
        const double se = std::sqrt(std::max(0.0, exact[i][f].variance()) / games);
        const double diff = std::abs(mc - mean);
        ++compared;
        if (se == 0.0) {
          if (diff > 1e-9 * std::max(1.0, std::abs(mean)))
            return {false, fmt("case %zu agent %zu %s: degenerate field differs (%.6g vs %.6g)", c, i,
                               std::string(oracle::kFieldNames[f]).c_str(), mc, mean)};
          continue;
        }
        worst = std::max(worst, diff / se);
        if (diff > 3 * se)
          return {false, fmt("case %zu agent %zu %s: |%.6g - %.6g| = %.2f SE", c, i,
                             std::string(oracle::kFieldNames[f]).c_str(), mc, mean, diff / se)};
      }
    }
  }
  return {true, fmt("%zu field means over %zu cases x 1e5 games, worst %.2f SE", compared, cases.size(), worst)};
}

Verdict genome_laws() {
  std::vector<bool> seen(Genome::kCount, false);
  for (unsigned b = 0; b < Genome::kCount; ++b) {
    const Genome g(static_cast<std::uint16_t>(b));
    const auto p = decode(g);
    if (encode(p) != g) return {false, fmt("roundtrip fails at %u", b)};
    const unsigned key = static_cast<unsigned>(std::lround(p.b * 7)) * 64 +
                         static_cast<unsigned>(std::lround(p.l * 7)) * 8 + static_cast<unsigned>(std::lround(p.q * 8) - 1);
    if (key >= Genome::kCount || seen[key]) return {false, fmt("decode not injective at %u", b)};
    seen[key] = true;
  }
  Rng rng(5);
  for (unsigned b = 0; b < Genome::kCount; ++b) {
    const Genome g(static_cast<std::uint16_t>(b));
    if (mutate(g, 0.0, rng) != g) return {false, "mutate(m=0) is not the identity"};
    if (mutate(g, 1.0, rng).bits() != (~b & Genome::kMask)) return {false, "mutate(m=1) is not the complement"};
    if (uniform_crossover(g, g, rng) != g) return {false, "crossover(g, g) != g"};
  }
  for (int k = 0; k < 100000; ++k) {
    const Genome p1(static_cast<std::uint16_t>(rng.below(512))), p2(static_cast<std::uint16_t>(rng.below(512)));
    const auto c = uniform_crossover(p1, p2, rng).bits();
    const auto agree = static_cast<std::uint16_t>(~(p1.bits() ^ p2.bits()) & Genome::kMask);
    if ((c & agree) != (p1.bits() & agree)) return {false, "crossover changed a locus where parents agree"};
  }

  // selection: empirical frequencies against weights computed here from scratch
  const double eps = 1e-5;
  const std::vector<std::vector<double>> fitness_sets{
      {3.0, 1.0}, {0.0, -2.0, 1.5, 4.0, 4.0}, {7.0, 7.0, 7.0}, {-1.0, 2.0, 0.5, 3.0, -4.0, 1.0, 0.0, 2.5, 1.0}};
  // two siblings two units apart: weights 4 + eps/2 and eps/2
  const double hi = (4.0 + eps / 2) / (4.0 + eps), lo = (eps / 2) / (4.0 + eps);
  if (std::abs(hi - 0.99999875000312) > 1e-12 || std::abs(lo - 1.24999687500781e-6) > 1e-17)
    return {false, "hand-derived two-sibling weights disagree"};
  double worst = 0.0;
  for (std::size_t s = 0; s < fitness_sets.size(); ++s) {
    const auto& f = fitness_sets[s];
    const double u_min = *std::min_element(f.begin(), f.end());
    std::vector<double> want(f.size());
    double total = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) total += want[k] = (f[k] - u_min) * (f[k] - u_min) + eps / f.size();
    for (auto& w : want) w /= total;
    const auto got = selection_probabilities(f, eps);
    for (std::size_t k = 0; k < f.size(); ++k)
      if (std::abs(got[k] - want[k]) > 1e-12) return {false, fmt("selection_probabilities set %zu index %zu", s, k)};
    if (s == 0 && (std::abs(want[0] - hi) > 1e-15 || std::abs(want[1] - lo) > 1e-15))
      return {false, "two-sibling probabilities"};
    std::vector<double> count(f.size(), 0.0);
    const int draws = 100000;
    Rng sr(derive_seed(2026, s));
    for (int d = 0; d < draws; ++d) ++count[select_parent(f, eps, sr)];
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double sigma = std::sqrt(draws * want[k] * (1 - want[k]));
      const double diff = std::abs(count[k] - draws * want[k]);
      // a one-count allowance keeps near-zero classes (sigma << 1) testable
      if (diff > std::max(3 * sigma, 1.0))
        return {false, fmt("select_parent set %zu index %zu: %.0f vs %.2f expected", s, k, count[k], draws * want[k])};
      if (sigma > 0) worst = std::max(worst, diff / sigma);
    }
  }
  return {true, fmt("512 roundtrips, operator laws, selection worst %.2f sigma", worst)};
}

bool bfs_connected(const Graph& g) {
  if (g.node_count() == 0) return true;
  std::vector<bool> seen(g.node_count(), false);
  std::deque<NodeId> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        queue.push_back(w);
      }
  }
  return reached == g.node_count();
}

std::string edge_bytes(const Graph& g) {
  std::ostringstream s;
  save_edge_list(g, s);
  return s.str();
}

Verdict conn_structure() {
  double mean_edges = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = generate_conn({400, 0.9, seed});
    if (g.node_count() != 400) return {false, fmt("seed %llu: %zu nodes", (unsigned long long)seed, g.node_count())};
    if (!bfs_connected(g)) return {false, fmt("seed %llu: disconnected", (unsigned long long)seed)};
    mean_edges += static_cast<double>(g.edge_count()) / 100;
  }
  for (std::size_t n : {2u, 3u, 50u, 400u})
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Graph g = generate_conn({n, 0.0, seed});
      if (g.edge_count() != n - 1 || !bfs_connected(g)) return {false, fmt("u=0, n=%zu: not a tree", n)};
    }
  if (edge_bytes(generate_conn({400, 0.9, 42})) != edge_bytes(generate_conn({400, 0.9, 42})))
    return {false, "same seed, different edge lists"};
  return {true, fmt("100 graphs connected, mean %.1f edges; u=0 trees; byte-exact", mean_edges)};
}

// ------------------------------------------------------------ desk-scale runs

ExperimentPlan desk_plan() {
  ExperimentPlan p;
  p.population = {100, 50, PreferenceMode::half_uniform};
  p.u = 0.9;
  p.evolution.w = 10;
  p.evolution.n_gen = 4;
  p.evolution.g = 300;
  p.runs = 10;
  p.base_seed = 1;
  p.jobs = std::max(1u, std::thread::hardware_concurrency());
  return p;
}

std::vector<RunRecord> run_or_throw(const ExperimentPlan& plan) {
  auto out = run_plan(plan);
  if (!out.failures.empty()) throw std::runtime_error("cell failed: " + out.failures.front().message);
  return std::move(out.records);
}

std::vector<const RunRecord*> pick(const std::vector<RunRecord>& recs, Scheme s, double pi) {
  std::vector<const RunRecord*> out;
  for (const auto& r : recs)
    if (r.scheme == s && r.pi == pi) out.push_back(&r);
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->run < b->run; });
  return out;
}

struct Means {
  double b = 0, l = 0, q = 0;
};

Means group_means(const RunRecord& r, Group g) {
  Means m;
  std::size_t n = 0;
  for (const auto& a : r.agents)
    if (a.group == g) {
      m.b += a.b;
      m.l += a.l;
      m.q += a.q;
      ++n;
    }
  if (n) m.b /= n, m.l /= n, m.q /= n;
  return m;
}

std::string run_marks(const std::vector<bool>& ok) {
  std::string s;
  for (bool b : ok) s += b ? '+' : '-';
  return s;
}

Verdict count_verdict(const std::vector<bool>& ok, std::size_t need, const std::string& extra = {}) {
  const auto k = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), true));
  return {k >= need, fmt("%zu/%zu runs [%s]%s", k, ok.size(), run_marks(ok).c_str(), extra.c_str())};
}

Verdict s0_ordering(const std::vector<RunRecord>& recs) {
  std::vector<bool> ok;
  std::size_t b_only = 0, q_only = 0;
  for (const auto* r : pick(recs, Scheme::S0, 0.0)) {
    const auto a = group_means(*r, Group::alpha), b = group_means(*r, Group::beta);
    b_only += a.b > b.b;
    q_only += a.q > b.q;
    ok.push_back(a.q > b.q && a.b > b.b);
  }
  return count_verdict(ok, 8, fmt("; B alone %zu, Q alone %zu", b_only, q_only));
}

double abs_or_zero(std::optional<double> x) { return x ? std::abs(*x) : 0.0; }

Verdict degree_dependence(const std::vector<RunRecord>& mwga, const std::vector<RunRecord>& naive) {
  const auto m = pick(mwga, Scheme::S0, 0.0), n = pick(naive, Scheme::S0, 0.0);
  std::vector<bool> positive, weaker;
  std::string rhos;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const auto rm = degree_correlation(*m[k], Group::alpha, Param::b);
    // a constant B column has no rank association: counted as zero
    const auto rn = degree_correlation(*n[k], Group::alpha, Param::b);
    positive.push_back(rm && *rm > 0);
    weaker.push_back(abs_or_zero(rn) < abs_or_zero(rm));
    rhos += fmt(" %.2f/%.2f", rm.value_or(0.0), rn.value_or(0.0));
  }
  const auto p = count_verdict(positive, 8), w = count_verdict(weaker, 8);
  return {p.pass && w.pass, "rho>0 " + p.detail + "; |naive|<|mwga| " + w.detail + "; rho mwga/naive" + rhos};
}

Verdict s1_collapse(const std::vector<RunRecord>& recs) {
  std::vector<bool> ok;
  double sb = 0, sq = 0;
  const auto rs = pick(recs, Scheme::S1, 4.0);
  for (const auto* r : rs) {
    const auto b = group_means(*r, Group::beta);
    sb += b.b / rs.size();
    sq += b.q / rs.size();
    ok.push_back(b.b >= 0.9 && b.q <= 0.20);
  }
  return count_verdict(ok, 8, fmt("; beta mean B %.3f, Q %.3f", sb, sq));
}

Verdict s3_uplift(const std::vector<RunRecord>& recs) {
  const auto s0 = pick(recs, Scheme::S0, 0.0), s3 = pick(recs, Scheme::S3, 1.0);
  std::vector<bool> ok;
  std::array<std::size_t, 6> part{};
  for (std::size_t k = 0; k < s0.size(); ++k) {
    bool all = true;
    std::size_t j = 0;
    for (Group g : {Group::alpha, Group::beta}) {
      const auto a = group_means(*s0[k], g), b = group_means(*s3[k], g);
      for (bool up : {b.b > a.b, b.l > a.l, b.q > a.q}) {
        part[j++] += up;
        all = all && up;
      }
    }
    ok.push_back(all);
  }
  return count_verdict(ok, 8,
                       fmt("; per parameter aB %zu aL %zu aQ %zu bB %zu bL %zu bQ %zu", part[0], part[1], part[2],
                           part[3], part[4], part[5]));
}

Verdict effectiveness_shape(const std::vector<RunRecord>& recs) {
  const auto table = effectiveness_table(recs);
  // pi = 0 contributes E = 0 by convention; the CSV leaves it blank
  std::vector<std::pair<double, double>> curve;
  std::string values;
  for (const auto& e : table) {
    if (e.scheme != Scheme::S1) continue;
    if (e.pi == 0.0) {
      curve.emplace_back(0.0, 0.0);
      values += " 0:0";
      continue;
    }
    if (!e.e_item) return {false, fmt("E_item missing at pi=%g", e.pi)};
    curve.emplace_back(e.pi, *e.e_item);
    values += fmt(" %g:%.1f", e.pi, *e.e_item);
  }
  if (curve.size() != 6) return {false, "incomplete sweep"};
  const auto best = std::max_element(curve.begin(), curve.end(),
                                     [](auto& a, auto& b) { return a.second < b.second; }) - curve.begin();
  const bool interior = best > 0 && best + 1 < static_cast<long>(curve.size());
  return {interior, fmt("argmax pi=%g; E_item", curve[best].first) + values};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  auto plan = desk_plan();
  plan.schemes = {Scheme::S0, Scheme::S1, Scheme::S3};
  plan.pi_values = {0.0, 1.0};
  plan.runs = 3;
  plan.evolution.g = 60;
  const auto root = fs::temp_directory_path() / "snsmq_acceptance_det";
  fs::remove_all(root);
  write_all_csv(root / "a", run_or_throw(plan), plan.degree_threshold);
  plan.jobs = 1;
  write_all_csv(root / "b", run_or_throw(plan), plan.degree_threshold);
  std::size_t bytes = 0;
  for (auto f : {kAgentsCsv, kSeriesCsv, kStrataCsv, kActivityCsv, kEffectivenessCsv}) {
    const auto a = slurp(root / "a" / f), b = slurp(root / "b" / f);
    if (a.empty() || a != b) {
      fs::remove_all(root);
      return {false, std::string(f) + " differs"};
    }
    bytes += a.size();
  }
  fs::remove_all(root);
  return {true, fmt("5 files, %zu bytes identical across runs and thread counts", bytes)};
}

void guarded(const char* name, const std::function<Verdict()>& f) {
  try {
    report(name, f());
  } catch (const std::exception& e) {
    report(name, {false, std::string("exception: ") + e.what()});
  }
}

}  // namespace

int main() {
  guarded("accounting-exactness", accounting_exactness);
  guarded("oracle-equivalence", oracle_equivalence);
  guarded("genome-operator-laws", genome_laws);
  guarded("conn-structure", conn_structure);

  std::vector<RunRecord> paired, naive, s1, sweep;
  try {
    auto plan = desk_plan();
    plan.schemes = {Scheme::S0, Scheme::S3};
    plan.pi_values = {1.0};
    paired = run_or_throw(plan);
    plan.schemes = {Scheme::S0};
    plan.evolver = Evolver::naive_ga;
    naive = run_or_throw(plan);
    plan = desk_plan();
    plan.schemes = {Scheme::S1};
    plan.pi_values = {4.0};
    s1 = run_or_throw(plan);
    plan.pi_values = {0.0, 0.4, 1.0, 2.0, 4.0, 8.0};
    sweep = run_or_throw(plan);
  } catch (const std::exception& e) {
    std::printf("desk-scale runs failed: %s\n", e.what());
  }
  guarded("s0-cooperation-ordering", [&] { return s0_ordering(paired); });
  guarded("degree-dependence", [&] { return degree_dependence(paired, naive); });
  guarded("s1-quality-collapse", [&] { return s1_collapse(s1); });
  guarded("s3-uplift", [&] { return s3_uplift(paired); });
  guarded("effectiveness-shape", [&] { return effectiveness_shape(sweep); });
  guarded("determinism", determinism);

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
