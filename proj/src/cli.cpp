#include "snsmq/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "snsmq/csv.hpp"
#include "snsmq/network.hpp"

namespace snsmq::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T to_number(const std::string& key, const std::string& value) {
  T out{};
  const std::string v = trim(value);
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("bad value for " + key + ": '" + value + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for " + key + ": '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// "0:10:0.2" (inclusive) or "0,0.4,1"
std::vector<double> parse_pi_values(const std::string& key, const std::string& value) {
  const auto colon = std::count(value.begin(), value.end(), ':');
  if (colon == 2) {
    const auto parts = [&] {
      std::vector<std::string> p;
      std::stringstream ss(value);
      std::string s;
      while (std::getline(ss, s, ':')) p.push_back(s);
      return p;
    }();
    const double lo = to_number<double>(key, parts[0]);
    const double hi = to_number<double>(key, parts[1]);
    const double step = to_number<double>(key, parts[2]);
    if (!(step > 0.0) || hi < lo) throw ConfigError("bad range for " + key);
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
    // k * step is not always the shortest decimal; snap to 1e-9
    for (auto& x : out) x = std::round(x * 1e9) / 1e9;
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(to_number<double>(key, item));
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "n",         "n_alpha", "preference_mode", "u",          "c_ref",     "mu",
      "delta",     "q_min",   "w",               "n_gen",      "g",         "m",
      "epsilon",   "mutate_test_world",          "schemes",    "scheme",    "pi_values",
      "pi",        "runs",    "seed",            "degree_threshold",        "evolver",
      "fresh_network_per_cell",                  "jobs",       "out",       "verbosity"};
  return keys;
}

void apply_setting(CliConfig& c, const std::string& key, const std::string& value) {
  auto& p = c.plan;
  if (key == "n") p.population.n = to_number<std::size_t>(key, value);
  else if (key == "n_alpha") p.population.n_alpha = to_number<std::size_t>(key, value);
  else if (key == "preference_mode") p.population.mode = parse_preference_mode(trim(value));
  else if (key == "u") p.u = to_number<double>(key, value);
  else if (key == "c_ref") p.economy.c_ref = to_number<double>(key, value);
  else if (key == "mu") p.economy.mu = to_number<double>(key, value);
  else if (key == "delta") p.economy.delta = to_number<double>(key, value);
  else if (key == "q_min") p.economy.q_min = to_number<double>(key, value);
  else if (key == "w") p.evolution.w = to_number<std::size_t>(key, value);
  else if (key == "n_gen") p.evolution.n_gen = to_number<std::size_t>(key, value);
  else if (key == "g") p.evolution.g = to_number<std::size_t>(key, value);
  else if (key == "m") p.evolution.m = to_number<double>(key, value);
  else if (key == "epsilon") p.evolution.epsilon = to_number<double>(key, value);
  else if (key == "mutate_test_world") p.evolution.mutate_test_world = to_bool(key, value);
  else if (key == "schemes" || key == "scheme") {
    p.schemes.clear();
    for (const auto& s : split_list(value)) p.schemes.push_back(parse_scheme(s));
    if (p.schemes.empty()) throw ConfigError("empty scheme list");
  } else if (key == "pi_values" || key == "pi") p.pi_values = parse_pi_values(key, value);
  else if (key == "runs") p.runs = to_number<std::size_t>(key, value);
  else if (key == "seed") p.base_seed = to_number<std::uint64_t>(key, value);
  else if (key == "degree_threshold") p.degree_threshold = to_number<std::size_t>(key, value);
  else if (key == "evolver") p.evolver = parse_evolver(trim(value));
  else if (key == "fresh_network_per_cell") p.fresh_network_per_cell = to_bool(key, value);
  else if (key == "jobs") p.jobs = std::max<std::size_t>(1, to_number<std::size_t>(key, value));
  else if (key == "out") c.out_dir = trim(value);
  else if (key == "verbosity") c.verbosity = to_number<int>(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

namespace {

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

// Binds every config key as a string flag on `cmd`; filled values are
// applied after the config file.
struct SettingFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void bind(CLI::App& cmd, const std::vector<std::string>& keys) {
    for (const auto& k : keys) options[k] = cmd.add_option(flag_name(k), values[k]);
  }

  void apply(CliConfig& c) const {
    for (const auto& [k, opt] : options)
      if (opt->count() > 0) apply_setting(c, k, values.at(k));
  }
};

std::size_t default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

int execute_plan(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const auto& plan = c.plan;
  plan.validate();
  ProgressFn progress;
  if (c.verbosity >= 2) {
    progress = [&err](const Cell& cell, std::size_t done, std::size_t total) {
      err << "[" << done << "/" << total << "] " << to_string(cell.scheme) << " pi=" << format_number(cell.pi)
          << " run=" << cell.run << '\n';
    };
  }
  const auto outcome = run_plan(plan, progress);
  write_all_csv(c.out_dir, outcome.records, plan.degree_threshold);
  for (const auto& f : outcome.failures)
    err << "error: cell " << to_string(f.cell.scheme) << " pi=" << format_number(f.cell.pi) << " run=" << f.cell.run
        << " failed: " << f.message << '\n';
  if (c.verbosity >= 1)
    out << "wrote " << outcome.records.size() << " run records to " << c.out_dir.string() << '\n';
  return outcome.failures.empty() ? kOk : kRuntime;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator for the SNS-norms game with monetary reward and article quality", "snsmq"};
  app.require_subcommand(1);

  // gen-net
  auto* gen = app.add_subcommand("gen-net", "Generate a connecting-nearest-neighbor network edge list");
  ConnConfig net;
  std::string net_out;
  gen->add_option("--n", net.n, "Number of nodes")->default_val(400);
  gen->add_option("--u", net.u, "Conversion probability")->default_val(0.9);
  gen->add_option("--seed", net.seed, "RNG seed")->default_val(0);
  gen->add_option("--out", net_out, "Output edge-list path")->required();

  // run / sweep share the experiment keys
  auto* run_cmd = app.add_subcommand("run", "Run one (scheme, pi) cell for several runs");
  auto* sweep = app.add_subcommand("sweep", "Run a pi sweep over several schemes");
  std::string run_config, sweep_config;
  SettingFlags run_flags, sweep_flags;
  run_cmd->add_option("--config", run_config, "Key = value config file");
  sweep->add_option("--config", sweep_config, "Key = value config file");
  run_flags.bind(*run_cmd, config_keys());
  sweep_flags.bind(*sweep, config_keys());

  // report
  auto* report = app.add_subcommand("report", "Recompute strata.csv and effectiveness.csv from raw CSVs");
  std::string report_in, report_out;
  std::size_t report_threshold = 50;
  report->add_option("--in", report_in, "Directory holding agents.csv and activity.csv")->required();
  report->add_option("--out", report_out, "Output directory (defaults to --in)");
  report->add_option("--degree-threshold", report_threshold, "Degree split for h/l subsets");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (gen->parsed()) {
      net.validate();
      const Graph g = generate_conn(net);
      std::ofstream f(net_out, std::ios::binary | std::ios::trunc);
      if (!f) {
        err << "error: cannot write " << net_out << '\n';
        return kRuntime;
      }
      save_edge_list(g, f);
      out << "nodes=" << g.node_count() << " edges=" << g.edge_count() << '\n';
      return kOk;
    }

    if (run_cmd->parsed() || sweep->parsed()) {
      const bool is_sweep = sweep->parsed();
      CliConfig c;
      c.plan.jobs = default_jobs();
      if (is_sweep) {
        c.plan.schemes = {Scheme::S1, Scheme::S2, Scheme::S3};
        c.plan.pi_values = default_pi_grid();
      }
      const auto& config_path = is_sweep ? sweep_config : run_config;
      if (!config_path.empty())
        for (const auto& [k, v] : read_config_file(config_path)) apply_setting(c, k, v);
      if (const char* env = std::getenv(kOutDirEnv); env && *env) c.out_dir = env;
      (is_sweep ? sweep_flags : run_flags).apply(c);

      if (!is_sweep) {
        if (c.plan.schemes.size() != 1) throw ConfigError("run takes exactly one scheme");
        if (c.plan.pi_values.size() != 1) throw ConfigError("run takes exactly one pi value");
        if (c.plan.schemes.front() == Scheme::S0 && c.plan.pi_values.front() != 0.0)
          err << "warning: pi ignored under S0\n";
      }
      return execute_plan(c, out, err);
    }

    if (report->parsed()) {
      const std::filesystem::path in_dir = report_in;
      const std::filesystem::path out_dir = report_out.empty() ? in_dir : std::filesystem::path(report_out);
      std::vector<RunRecord> records;
      try {
        records = read_raw_csv(in_dir);
      } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
      }
      write_derived_csv(out_dir, records, report_threshold);
      out << "wrote " << kStrataCsv << " and " << kEffectivenessCsv << " to " << out_dir.string() << '\n';
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}

}  // namespace snsmq::cli
