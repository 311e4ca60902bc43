#include "oddic/fixtures.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oddic/errors.hpp"
#include "oddic/random.hpp"

namespace oddic {

using nlohmann::json;

namespace {

json parse_json(std::string_view text, std::string_view origin) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports "line L, column C" in the message.
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
}

[[noreturn]] void field_error(std::string_view origin, std::string_view field, std::string_view what) {
  throw ConfigError(std::string(origin) + ": field '" + std::string(field) + "': " + std::string(what));
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, std::string_view origin,
                         std::string_view where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      field_error(origin, std::string(where) + key, "unknown field");
    }
  }
}

double number_field(const json& obj, const std::string& key, std::string_view origin, std::string_view where) {
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(origin, std::string(where) + key, "missing");
  if (!it->is_number()) field_error(origin, std::string(where) + key, "expected a number");
  return it->get<double>();
}

}  // namespace

Digraph parse_graph_fixture(std::string_view json_text, std::string_view origin) {
  const json doc = parse_json(json_text, origin);
  if (!doc.is_object()) throw ConfigError(std::string(origin) + ": expected a JSON object");
  reject_unknown_keys(doc, {"n", "in_neighbors"}, origin, "");

  const auto n_it = doc.find("n");
  if (n_it == doc.end()) field_error(origin, "n", "missing");
  if (!n_it->is_number_unsigned()) field_error(origin, "n", "expected a non-negative integer");
  const auto n = n_it->get<std::size_t>();

  const auto lists_it = doc.find("in_neighbors");
  if (lists_it == doc.end()) field_error(origin, "in_neighbors", "missing");
  if (!lists_it->is_array()) field_error(origin, "in_neighbors", "expected an array of arrays");
  if (lists_it->size() != n) {
    field_error(origin, "in_neighbors",
                "has " + std::to_string(lists_it->size()) + " entries but n = " + std::to_string(n));
  }

  std::vector<std::vector<NodeId>> lists(n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = (*lists_it)[i];
    const std::string where = "in_neighbors[" + std::to_string(i) + "]";
    if (!row.is_array()) field_error(origin, where, "expected an array");
    std::set<std::size_t> seen;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const std::string at = where + "[" + std::to_string(k) + "]";
      if (!row[k].is_number_unsigned()) field_error(origin, at, "expected a node index");
      const auto j = row[k].get<std::size_t>();
      if (j >= n) field_error(origin, at, "node " + std::to_string(j) + " out of range");
      if (j == i) field_error(origin, at, "self-loop");
      if (!seen.insert(j).second) field_error(origin, at, "duplicate in-neighbour " + std::to_string(j));
      lists[i].push_back(j);
    }
  }
  return Digraph(std::move(lists));
}

Digraph load_graph_fixture(const std::filesystem::path& path) {
  return parse_graph_fixture(read_file(path), path.string());
}

std::string graph_fixture_json(const Digraph& g) {
  // One adjacency row per line keeps fixtures diff-able.
  std::ostringstream out;
  out << "{\n  \"n\": " << g.size() << ",\n  \"in_neighbors\": [\n";
  for (NodeId i = 0; i < g.size(); ++i) {
    out << "    " << json(g.adjacency()[i]).dump() << (i + 1 < g.size() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
  return out.str();
}

std::vector<DisruptorSpec> parse_disruptor_table(std::string_view json_text, std::string_view origin) {
  const json doc = parse_json(json_text, origin);
  if (!doc.is_object()) throw ConfigError(std::string(origin) + ": expected a JSON object");
  reject_unknown_keys(doc, {"table", "description", "disruptors"}, origin, "");
  const auto table_it = doc.find("table");
  if (table_it == doc.end() || !table_it->is_string()) field_error(origin, "table", "expected a string");
  const std::string table = table_it->get<std::string>();
  const auto rows_it = doc.find("disruptors");
  if (rows_it == doc.end() || !rows_it->is_array()) field_error(origin, "disruptors", "expected an array");

  std::vector<DisruptorSpec> specs;
  std::set<std::string> names;
  for (std::size_t k = 0; k < rows_it->size(); ++k) {
    const json& row = (*rows_it)[k];
    const std::string where = "disruptors[" + std::to_string(k) + "].";
    if (!row.is_object()) field_error(origin, where.substr(0, where.size() - 1), "expected an object");
    const auto name_it = row.find("name");
    if (name_it == row.end() || !name_it->is_string()) field_error(origin, where + "name", "expected a string");
    const auto kind_it = row.find("kind");
    if (kind_it == row.end() || !kind_it->is_string()) field_error(origin, where + "kind", "expected a string");

    DisruptorSpec spec;
    spec.name = table + "/" + name_it->get<std::string>();
    if (!names.insert(spec.name).second) field_error(origin, where + "name", "duplicate row " + spec.name);
    try {
      spec.kind = parse_disruptor_kind(kind_it->get<std::string>());
    } catch (const ParameterError& e) {
      field_error(origin, where + "kind", e.what());
    }
    switch (spec.kind) {
      case DisruptorKind::sine:
        reject_unknown_keys(row, {"name", "kind", "note", "A", "s_x", "s_y", "omega"}, origin, where);
        spec.amplitude = number_field(row, "A", origin, where);
        spec.shift_x = number_field(row, "s_x", origin, where);
        spec.shift_y = number_field(row, "s_y", origin, where);
        spec.omega = number_field(row, "omega", origin, where);
        break;
      case DisruptorKind::linear:
        reject_unknown_keys(row, {"name", "kind", "note", "m"}, origin, where);
        spec.gradient = number_field(row, "m", origin, where);
        break;
      case DisruptorKind::noise:
        reject_unknown_keys(row, {"name", "kind", "note"}, origin, where);
        break;
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("ODDIC_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
#ifdef ODDIC_DEFAULT_DATA_DIR
  return ODDIC_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string content_hash(std::string_view bytes) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + hex;
}

FixtureStore::FixtureStore(std::filesystem::path data_dir) : data_dir_(std::move(data_dir)) {}

std::string FixtureStore::load(const std::filesystem::path& path) const {
  std::string text = read_file(path);
  std::string key = path.lexically_normal().string();
  const auto rel = path.lexically_normal().lexically_relative(data_dir_.lexically_normal());
  if (!rel.empty() && rel.native().rfind("..", 0) != 0) key = rel.generic_string();
  used_[key] = content_hash(text);
  return text;
}

Digraph FixtureStore::graph(std::string_view ref) const {
  std::filesystem::path path(ref);
  if (path.extension() != ".json" && !path.has_parent_path()) {
    path = data_dir_ / "graphs" / (std::string(ref) + ".json");
  }
  return parse_graph_fixture(load(path), path.string());
}

std::vector<DisruptorSpec> FixtureStore::table(std::string_view table_name) const {
  const auto path = data_dir_ / "disruptors" / (std::string(table_name) + ".json");
  return parse_disruptor_table(load(path), path.string());
}

DisruptorSpec FixtureStore::disruptor(std::string_view ref) const {
  const auto slash = ref.find('/');
  if (slash == std::string_view::npos || slash == 0 || slash + 1 == ref.size()) {
    throw ConfigError("disruptor reference '" + std::string(ref) + "' must look like TABLE/ROW");
  }
  for (auto& spec : table(ref.substr(0, slash))) {
    if (spec.name == ref) return spec;
  }
  throw ConfigError("disruptor '" + std::string(ref) + "' not found");
}

}  // namespace oddic
