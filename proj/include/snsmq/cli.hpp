#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "snsmq/experiments.hpp"

namespace snsmq::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kBadInput = 3, kRuntime = 4 };

/// Everything a run/sweep needs: the experiment plan plus output settings.
struct CliConfig {
  ExperimentPlan plan;
  std::filesystem::path out_dir = "out";
  int verbosity = 1;
};

/// Environment variable that overrides the configured output directory.
inline constexpr const char* kOutDirEnv = "SNSMQ_OUT_DIR";

/// Keys accepted in config files; each is also a --flag with '_' -> '-'.
const std::vector<std::string>& config_keys();

/// Applies one key=value setting. Throws ConfigError on unknown keys or bad values.
void apply_setting(CliConfig& config, const std::string& key, const std::string& value);

/// Parses a flat "key = value" file ('#' comments, blank lines allowed).
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace snsmq::cli
