#include "snsmq/csv.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>
#include <tuple>

namespace snsmq {

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

void write_agents_csv(std::span<const RunRecord> records, std::ostream& out) {
  out << "run,scheme,pi,agent,degree,group,B,L,Q,P0\n";
  for (const auto& r : records) {
    const auto prefix = std::to_string(r.run) + ',' + std::string(to_string(r.scheme)) + ',' + format_number(r.pi);
    for (const auto& a : r.agents) {
      out << prefix << ',' << a.id << ',' << a.degree << ',' << to_string(a.group) << ',' << format_number(a.b)
          << ',' << format_number(a.l) << ',' << format_number(a.q) << ',' << format_number(a.p0) << '\n';
    }
  }
}

void write_series_csv(std::span<const RunRecord> records, std::ostream& out) {
  out << "run,scheme,pi,generation,group,mean_B,mean_L,mean_Q,mean_P0\n";
  for (const auto& r : records) {
    const auto prefix = std::to_string(r.run) + ',' + std::string(to_string(r.scheme)) + ',' + format_number(r.pi);
    for (const auto& s : r.series) {
      for (auto [group, m] : {std::pair{Group::alpha, &s.alpha}, std::pair{Group::beta, &s.beta}}) {
        if (m->count == 0) continue;
        out << prefix << ',' << s.generation << ',' << to_string(group) << ',' << format_number(m->b) << ','
            << format_number(m->l) << ',' << format_number(m->q) << ',' << format_number(m->p0) << '\n';
      }
    }
  }
}

void write_activity_csv(std::span<const RunRecord> records, std::ostream& out) {
  out << "scheme,pi,run,items,views,comments,metas,K_total\n";
  for (const auto& r : records) {
    out << to_string(r.scheme) << ',' << format_number(r.pi) << ',' << r.run << ',' << r.activity.items << ','
        << r.activity.views << ',' << r.activity.comments << ',' << r.activity.metas << ','
        << format_number(r.activity.money) << '\n';
  }
}

void write_strata_csv(std::span<const StratumRow> rows, std::ostream& out) {
  out << "scheme,pi,subset,mean_B,mean_L,mean_Q,mean_P0,n_agents\n";
  for (const auto& row : rows) {
    out << to_string(row.scheme) << ',' << format_number(row.pi) << ',' << to_string(row.subset) << ',';
    if (row.means) {
      out << format_number(row.means->b) << ',' << format_number(row.means->l) << ','
          << format_number(row.means->q) << ',' << format_number(row.means->p0);
    } else {
      out << ",,,";
    }
    out << ',' << row.n_agents << '\n';
  }
}

void write_effectiveness_csv(std::span<const EffectivenessRecord> rows, std::ostream& out) {
  out << "scheme,pi,k_bar,e_item,e_view,e_comm,e_meta\n";
  for (const auto& e : rows) {
    out << to_string(e.scheme) << ',' << format_number(e.pi) << ',' << format_number(e.k_bar) << ','
        << opt(e.e_item) << ',' << opt(e.e_view) << ',' << opt(e.e_comm) << ',' << opt(e.e_meta) << '\n';
  }
}

namespace {

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  fn(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void write_derived_csv(const std::filesystem::path& dir, std::span<const RunRecord> records,
                       std::size_t degree_threshold) {
  std::filesystem::create_directories(dir);
  const auto strata = stratify(records, degree_threshold);
  const auto eff = effectiveness_table(records);
  write_file(dir / kStrataCsv, [&](std::ostream& o) { write_strata_csv(strata, o); });
  write_file(dir / kEffectivenessCsv, [&](std::ostream& o) { write_effectiveness_csv(eff, o); });
}

void write_all_csv(const std::filesystem::path& dir, std::span<const RunRecord> records,
                   std::size_t degree_threshold) {
  std::filesystem::create_directories(dir);
  write_file(dir / kAgentsCsv, [&](std::ostream& o) { write_agents_csv(records, o); });
  write_file(dir / kSeriesCsv, [&](std::ostream& o) { write_series_csv(records, o); });
  write_file(dir / kActivityCsv, [&](std::ostream& o) { write_activity_csv(records, o); });
  write_derived_csv(dir, records, degree_threshold);
}

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

namespace {

template <typename T>
T parse_field(const std::string& s, const std::string& what, std::size_t lineno) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw FormatError(what + ": bad value '" + s + "' on line " + std::to_string(lineno));
  return value;
}

struct CsvTable {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> linenos;
};

CsvTable read_table(const std::filesystem::path& path, std::string_view header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("missing input file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.filename().string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw FormatError(path.filename().string() + ": unexpected header '" + line + "'");
  const std::size_t width = split_csv_line(header).size();
  CsvTable t;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != width)
      throw FormatError(path.filename().string() + ": wrong field count on line " + std::to_string(lineno));
    t.rows.push_back(std::move(fields));
    t.linenos.push_back(lineno);
  }
  return t;
}

Group parse_group(const std::string& s, std::size_t lineno) {
  if (s == "alpha") return Group::alpha;
  if (s == "beta") return Group::beta;
  throw FormatError("agents.csv: bad group '" + s + "' on line " + std::to_string(lineno));
}

}  // namespace

std::vector<RunRecord> read_raw_csv(const std::filesystem::path& dir) {
  const auto agents = read_table(dir / kAgentsCsv, "run,scheme,pi,agent,degree,group,B,L,Q,P0");
  const auto activity = read_table(dir / kActivityCsv, "scheme,pi,run,items,views,comments,metas,K_total");
  if (activity.rows.empty()) throw FormatError("activity.csv has no rows");

  using Key = std::tuple<int, double, std::size_t>;  // scheme, pi, run
  std::vector<RunRecord> records;
  std::map<Key, std::size_t> index;
  for (std::size_t k = 0; k < activity.rows.size(); ++k) {
    const auto& f = activity.rows[k];
    const auto ln = activity.linenos[k];
    RunRecord r;
    try {
      r.scheme = parse_scheme(f[0]);
    } catch (const ConfigError&) {
      throw FormatError("activity.csv: bad scheme on line " + std::to_string(ln));
    }
    r.pi = parse_field<double>(f[1], "activity.csv", ln);
    r.run = parse_field<std::size_t>(f[2], "activity.csv", ln);
    r.activity.items = parse_field<std::uint64_t>(f[3], "activity.csv", ln);
    r.activity.views = parse_field<std::uint64_t>(f[4], "activity.csv", ln);
    r.activity.comments = parse_field<std::uint64_t>(f[5], "activity.csv", ln);
    r.activity.metas = parse_field<std::uint64_t>(f[6], "activity.csv", ln);
    r.activity.money = parse_field<double>(f[7], "activity.csv", ln);
    const Key key{static_cast<int>(r.scheme), r.pi, r.run};
    if (index.contains(key)) throw FormatError("activity.csv: duplicate cell on line " + std::to_string(ln));
    index.emplace(key, records.size());
    records.push_back(std::move(r));
  }

  for (std::size_t k = 0; k < agents.rows.size(); ++k) {
    const auto& f = agents.rows[k];
    const auto ln = agents.linenos[k];
    Scheme scheme;
    try {
      scheme = parse_scheme(f[1]);
    } catch (const ConfigError&) {
      throw FormatError("agents.csv: bad scheme on line " + std::to_string(ln));
    }
    const Key key{static_cast<int>(scheme), parse_field<double>(f[2], "agents.csv", ln),
                  parse_field<std::size_t>(f[0], "agents.csv", ln)};
    auto it = index.find(key);
    if (it == index.end()) throw FormatError("agents.csv: cell without activity row on line " + std::to_string(ln));
    AgentRecord a;
    a.id = parse_field<NodeId>(f[3], "agents.csv", ln);
    a.degree = parse_field<std::size_t>(f[4], "agents.csv", ln);
    a.group = parse_group(f[5], ln);
    a.b = parse_field<double>(f[6], "agents.csv", ln);
    a.l = parse_field<double>(f[7], "agents.csv", ln);
    a.q = parse_field<double>(f[8], "agents.csv", ln);
    a.p0 = parse_field<double>(f[9], "agents.csv", ln);
    records[it->second].agents.push_back(a);
  }
  for (const auto& r : records)
    if (r.agents.empty()) throw FormatError("agents.csv: no agents for a cell listed in activity.csv");
  return records;
}

}  // namespace snsmq
