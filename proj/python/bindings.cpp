#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>
#include <pybind11/operators.h>

#include <sstream>

#include "snsmq/cli.hpp"
#include "snsmq/csv.hpp"
#include "snsmq/evolution.hpp"
#include "snsmq/experiments.hpp"
#include "snsmq/game.hpp"
#include "snsmq/genome.hpp"
#include "snsmq/network.hpp"

namespace py = pybind11;
using namespace snsmq;

namespace {

py::dict tally_to_dict(const GameTally& t) {
  std::vector<double> psych, money, cost;
  std::vector<std::uint64_t> posts, vr, vm, cr, cm, mm, mr;
  for (const auto& a : t.agents) {
    psych.push_back(a.psych);
    money.push_back(a.money);
    cost.push_back(a.cost);
    posts.push_back(a.posts);
    vr.push_back(a.views_received);
    vm.push_back(a.views_made);
    cr.push_back(a.comments_received);
    cm.push_back(a.comments_made);
    mm.push_back(a.metas_made);
    mr.push_back(a.metas_received);
  }
  py::dict d;
  d["psych"] = psych;
  d["money"] = money;
  d["cost"] = cost;
  d["posts"] = posts;
  d["views_received"] = vr;
  d["views_made"] = vm;
  d["comments_received"] = cr;
  d["comments_made"] = cm;
  d["metas_made"] = mm;
  d["metas_received"] = mr;
  return d;
}

std::vector<AgentProfile> profiles_from(const std::vector<double>& m_pref) {
  std::vector<AgentProfile> p(m_pref.size());
  for (std::size_t i = 0; i < m_pref.size(); ++i)
    p[i] = AgentProfile{static_cast<NodeId>(i), m_pref[i], group_for(m_pref[i])};
  return p;
}

py::dict episode_to_dict(const EpisodeResult& r) {
  std::vector<std::uint16_t> genomes;
  for (auto g : r.final_genomes) genomes.push_back(g.bits());
  py::list series;
  for (const auto& s : r.series) {
    py::dict row;
    row["generation"] = s.generation;
    for (auto [name, m] : {std::pair{"alpha", &s.alpha}, std::pair{"beta", &s.beta}}) {
      if (m->count == 0) continue;
      row[name] = py::make_tuple(m->b, m->l, m->q, m->p0);
    }
    series.append(row);
  }
  py::dict d;
  d["genomes"] = genomes;
  d["series"] = series;
  d["tally"] = tally_to_dict(r.final_tally);
  return d;
}

}  // namespace

PYBIND11_MODULE(_snsmq, m) {
  m.doc() = "SNS-norms game with monetary reward and article quality";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<StructureError>(m, "StructureError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def("degree", &Graph::degree)
      .def("neighbors", [](const Graph& g, NodeId i) {
        auto s = g.neighbors(i);
        return std::vector<NodeId>(s.begin(), s.end());
      })
      .def("edges", &Graph::edges)
      .def("is_connected", &Graph::is_connected)
      .def("to_edge_list", [](const Graph& g) {
        std::ostringstream out;
        save_edge_list(g, out);
        return out.str();
      })
      .def_static("from_edge_list", [](const std::string& text) {
        std::istringstream in(text);
        return load_edge_list(in);
      })
      .def(py::self == py::self);

  m.def("generate_conn", [](std::size_t n, double u, std::uint64_t seed) { return generate_conn({n, u, seed}); },
        py::arg("n"), py::arg("u") = 0.9, py::arg("seed") = 0);

  m.def("post_probability", &post_probability, py::arg("b"), py::arg("q"), py::arg("q_min") = 0.125);
  m.def("view_probability", &view_probability, py::arg("q_poster"), py::arg("s_j"));
  m.def("stage_costs", [](double c_ref, double mu, double delta, double q) {
    const auto s = stage_costs({c_ref, mu, delta, 0.125}, q);
    return py::make_tuple(s.c0, s.r0, s.c1, s.r1, s.c2, s.r2);
  }, py::arg("c_ref"), py::arg("mu"), py::arg("delta"), py::arg("q"));
  m.def("utility", py::overload_cast<double, double, double, double>(&utility), py::arg("psych"),
        py::arg("money"), py::arg("cost"), py::arg("m_pref"));

  m.def("decode", [](std::uint16_t bits) {
    const auto p = decode(Genome(bits));
    return py::make_tuple(p.b, p.l, p.q);
  }, py::arg("bits"));
  m.def("encode", [](double b, double l, double q) { return encode({b, l, q}).bits(); }, py::arg("b"),
        py::arg("l"), py::arg("q"));
  m.def("selection_probabilities", [](const std::vector<double>& f, double eps) {
    return selection_probabilities(f, eps);
  }, py::arg("fitness"), py::arg("epsilon") = 1e-5);

  m.def("play_game", [](const Graph& g, const std::vector<std::uint16_t>& genomes, const std::string& scheme,
                        double pi, std::uint64_t seed) {
    std::vector<StrategyParams> st;
    for (auto b : genomes) st.push_back(decode(Genome(b)));
    Rng rng(seed);
    GameTally t(g.node_count());
    play_game_into(g, st, {parse_scheme(scheme), pi}, {}, rng, t);
    return tally_to_dict(t);
  }, py::arg("graph"), py::arg("genomes"), py::arg("scheme") = "S0", py::arg("pi") = 0.0, py::arg("seed") = 0);

  m.def("run_episode", [](const Graph& g, const std::vector<double>& m_pref, const std::string& scheme, double pi,
                          std::size_t w, std::size_t n_gen, std::size_t generations, double mutation,
                          std::uint64_t seed, const std::string& evolver) {
    const auto profiles = profiles_from(m_pref);
    EvolutionConfig cfg;
    cfg.w = w;
    cfg.n_gen = n_gen;
    cfg.g = generations;
    cfg.m = mutation;
    const SchemeConfig sc{parse_scheme(scheme), pi};
    const Evolver ev = parse_evolver(evolver);
    Rng rng(seed);
    EpisodeResult r;
    {
      py::gil_scoped_release release;
      r = ev == Evolver::mwga ? run_episode(g, profiles, sc, {}, cfg, rng)
                              : run_episode_naive_ga(g, profiles, sc, {}, cfg, rng);
    }
    return episode_to_dict(r);
  }, py::arg("graph"), py::arg("m_pref"), py::arg("scheme") = "S0", py::arg("pi") = 0.0, py::arg("w") = 10,
     py::arg("n_gen") = 4, py::arg("g") = 100, py::arg("m") = 0.01, py::arg("seed") = 0,
     py::arg("evolver") = "mwga");

  m.def("run_plan", [](const std::filesystem::path& out_dir, const std::map<std::string, std::string>& settings) {
    cli::CliConfig c;
    for (const auto& [k, v] : settings) cli::apply_setting(c, k, v);
    PlanOutcome outcome;
    {
      py::gil_scoped_release release;
      outcome = run_plan(c.plan);
      write_all_csv(out_dir, outcome.records, c.plan.degree_threshold);
    }
    return py::make_tuple(outcome.records.size(), outcome.failures.size());
  }, py::arg("out_dir"), py::arg("settings"),
     "Runs an experiment plan described by config keys and writes the five CSV files.");

  m.def("config_keys", &cli::config_keys);
}
