#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "oddic/experiments.hpp"

namespace oddic {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

/// Parses a RunConfig from JSON. Missing, unknown or ill-typed fields and
/// violated invariants raise ConfigError naming the field or rule.
RunConfig parse_config(std::string_view json_text, std::string_view origin = "<memory>");
RunConfig load_config(const std::filesystem::path& path);
/// Serialises every field explicitly; parse_config(config_to_json(c)) == c.
std::string config_to_json(const RunConfig& config);

std::string options_to_json(const ExperimentOptions& options);

struct ManifestInfo {
  std::string command;         // "run", "exp1", ...
  std::uint64_t master_seed = 0;
  std::string config_json;     // echoed verbatim into the manifest
  std::map<std::string, std::string> fixtures;  // path -> content hash
};

struct WrittenFile {
  std::string name;
  std::size_t rows = 0;  // data rows, header excluded
  std::string hash;
};

/// Writes trajectories.csv, metrics.csv, summary.csv and manifest.json into
/// out_dir (created if needed). Column order and number formatting are fixed,
/// and nothing time-dependent is written, so identical inputs give
/// byte-identical files. Throws IoError with the failing path.
std::vector<WrittenFile> write_outputs(const std::vector<RunRecord>& records,
                                       const std::vector<BatchSummary>& summaries,
                                       const std::filesystem::path& out_dir,
                                       const ManifestInfo& info);

}  // namespace oddic
