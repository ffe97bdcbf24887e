#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snsmq/experiments.hpp"

namespace snsmq {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double x);

void write_agents_csv(std::span<const RunRecord> records, std::ostream& out);
void write_series_csv(std::span<const RunRecord> records, std::ostream& out);
void write_activity_csv(std::span<const RunRecord> records, std::ostream& out);
void write_strata_csv(std::span<const StratumRow> rows, std::ostream& out);
void write_effectiveness_csv(std::span<const EffectivenessRecord> rows, std::ostream& out);

inline constexpr std::string_view kAgentsCsv = "agents.csv";
inline constexpr std::string_view kSeriesCsv = "series.csv";
inline constexpr std::string_view kStrataCsv = "strata.csv";
inline constexpr std::string_view kActivityCsv = "activity.csv";
inline constexpr std::string_view kEffectivenessCsv = "effectiveness.csv";

/// Writes all five CSV files into `dir` (created if needed).
void write_all_csv(const std::filesystem::path& dir, std::span<const RunRecord> records,
                   std::size_t degree_threshold);

/// Writes strata.csv and effectiveness.csv derived from `records`.
void write_derived_csv(const std::filesystem::path& dir, std::span<const RunRecord> records,
                       std::size_t degree_threshold);

/// Rebuilds run records (agents and activity; no series, no per-agent
/// tallies) from agents.csv and activity.csv. Throws FormatError on missing
/// or malformed files.
std::vector<RunRecord> read_raw_csv(const std::filesystem::path& dir);

/// Minimal CSV row splitter for the files above (no quoting needed).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace snsmq
