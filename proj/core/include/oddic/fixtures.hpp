#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "oddic/digraph.hpp"
#include "oddic/disruptors.hpp"

namespace oddic {

/// Parses a graph fixture: {"n": int, "in_neighbors": [[int, ...], ...]}.
/// Throws ConfigError naming the offending line or field.
Digraph parse_graph_fixture(std::string_view json_text, std::string_view origin = "<memory>");
Digraph load_graph_fixture(const std::filesystem::path& path);
std::string graph_fixture_json(const Digraph& g);

/// Parses a disruptor table: {"table": "EXP2", "disruptors": [{"name": "D1",
/// "kind": "T1", "A": .., "s_x": .., "s_y": .., "omega": ..}, ...]}.
/// Sine rows need exactly A, s_x, s_y, omega; linear rows need m; noise rows
/// take no parameters. Row names are returned qualified ("EXP2/D1").
std::vector<DisruptorSpec> parse_disruptor_table(std::string_view json_text,
                                                 std::string_view origin = "<memory>");

/// ODDIC_DATA_DIR from the environment, else the directory configured at build time.
std::filesystem::path default_data_dir();

std::string read_file(const std::filesystem::path& path);
/// "fnv1a64:<16 hex digits>" of the bytes.
std::string content_hash(std::string_view bytes);

/// Resolves bundled fixtures by name and remembers the content hash of
/// every file it has read.
class FixtureStore {
 public:
  explicit FixtureStore(std::filesystem::path data_dir = default_data_dir());

  /// A bundled name ("exp1_7node") or a path to a .json fixture.
  Digraph graph(std::string_view ref) const;

  /// "TABLE/ROW", e.g. "EXP2/D3".
  DisruptorSpec disruptor(std::string_view ref) const;

  std::vector<DisruptorSpec> table(std::string_view table_name) const;

  /// path (relative to the data dir when inside it) -> content hash.
  const std::map<std::string, std::string>& used_files() const { return used_; }

  const std::filesystem::path& data_dir() const { return data_dir_; }

 private:
  std::string load(const std::filesystem::path& path) const;

  std::filesystem::path data_dir_;
  mutable std::map<std::string, std::string> used_;
};

}  // namespace oddic
