#include "oddic/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "oddic/errors.hpp"
#include "oddic/fixtures.hpp"

#ifndef ODDIC_VERSION
#define ODDIC_VERSION "unknown"
#endif

namespace oddic {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc{}) throw IoError("cannot format floating-point value");
  return std::string(buf, res.ptr);
}

namespace {

class ConfigReader {
 public:
  ConfigReader(std::string_view origin) : origin_(origin) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw ConfigError(origin_ + ": field '" + field + "': " + what);
  }

  void only(const json& obj, const std::string& where, const std::set<std::string>& allowed) const {
    if (!obj.is_object()) fail(where.empty() ? "<root>" : where, "expected an object");
    for (const auto& [key, _] : obj.items()) {
      if (!allowed.contains(key)) fail(join(where, key), "unknown field");
    }
  }

  const json* find(const json& obj, const std::string& key) const {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  const json& require(const json& obj, const std::string& where, const std::string& key) const {
    const json* v = find(obj, key);
    if (v == nullptr) fail(join(where, key), "missing");
    return *v;
  }

  double number(const json& v, const std::string& field) const {
    if (!v.is_number()) fail(field, "expected a number");
    return v.get<double>();
  }

  std::uint64_t unsigned_int(const json& v, const std::string& field) const {
    if (!v.is_number_unsigned()) fail(field, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const json& v, const std::string& field) const {
    if (!v.is_string()) fail(field, "expected a string");
    return v.get<std::string>();
  }

  static std::string join(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
  }

 private:
  std::string origin_;
};

}  // namespace

RunConfig parse_config(std::string_view json_text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  const ConfigReader rd(origin);
  rd.only(doc, "", {"graph", "policy", "msr_d", "eta", "t_max", "err", "init", "disruptors",
                    "master_seed", "active_from", "literal_eq11"});

  RunConfig cfg;

  const json& graph = rd.require(doc, "", "graph");
  rd.only(graph, "graph", {"fixture", "n", "in_degree", "seed"});
  if (const json* f = rd.find(graph, "fixture")) {
    for (const char* k : {"n", "in_degree", "seed"}) {
      if (rd.find(graph, k)) rd.fail(std::string("graph.") + k, "not allowed together with graph.fixture");
    }
    cfg.graph.fixture = rd.string(*f, "graph.fixture");
    if (cfg.graph.fixture.empty()) rd.fail("graph.fixture", "must not be empty");
  } else {
    cfg.graph.n = rd.unsigned_int(rd.require(graph, "graph", "n"), "graph.n");
    cfg.graph.in_degree = rd.unsigned_int(rd.require(graph, "graph", "in_degree"), "graph.in_degree");
    if (const json* s = rd.find(graph, "seed")) cfg.graph.seed = rd.unsigned_int(*s, "graph.seed");
  }

  try {
    cfg.policy.kind = parse_policy_kind(rd.string(rd.require(doc, "", "policy"), "policy"));
  } catch (const ParameterError& e) {
    rd.fail("policy", e.what());
  }
  if (const json* d = rd.find(doc, "msr_d")) {
    if (cfg.policy.kind != PolicyKind::msr) rd.fail("msr_d", "only valid with policy \"msr\"");
    cfg.policy.msr_d = rd.unsigned_int(*d, "msr_d");
    cfg.msr_d_explicit = true;
  }
  if (const json* v = rd.find(doc, "eta")) cfg.policy.eta = rd.number(*v, "eta");
  if (const json* v = rd.find(doc, "literal_eq11")) {
    if (!v->is_boolean()) rd.fail("literal_eq11", "expected a boolean");
    cfg.policy.literal_eq11 = v->get<bool>();
  }
  if (const json* v = rd.find(doc, "t_max")) cfg.t_max = rd.unsigned_int(*v, "t_max");
  if (const json* v = rd.find(doc, "err")) cfg.err = rd.number(*v, "err");
  if (const json* v = rd.find(doc, "master_seed")) cfg.master_seed = rd.unsigned_int(*v, "master_seed");
  if (const json* v = rd.find(doc, "active_from")) cfg.active_from = rd.unsigned_int(*v, "active_from");

  const json& init = rd.require(doc, "", "init");
  rd.only(init, "init", {"mu", "sigma", "seed"});
  cfg.init.mu = rd.number(rd.require(init, "init", "mu"), "init.mu");
  cfg.init.sigma = rd.number(rd.require(init, "init", "sigma"), "init.sigma");
  if (const json* s = rd.find(init, "seed")) cfg.init.seed = rd.unsigned_int(*s, "init.seed");

  if (const json* list = rd.find(doc, "disruptors")) {
    if (!list->is_array()) rd.fail("disruptors", "expected an array");
    for (std::size_t k = 0; k < list->size(); ++k) {
      const std::string where = "disruptors[" + std::to_string(k) + "]";
      const json& item = (*list)[k];
      rd.only(item, where, {"spec", "node"});
      DisruptorAssignment a;
      a.spec = rd.string(rd.require(item, where, "spec"), where + ".spec");
      if (const json* node = rd.find(item, "node")) a.node = rd.unsigned_int(*node, where + ".node");
      cfg.disruptors.push_back(std::move(a));
    }
  }

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.string());
}

namespace {

ordered_json config_json_value(const RunConfig& cfg) {
  ordered_json j;
  ordered_json graph;
  if (!cfg.graph.fixture.empty()) {
    graph["fixture"] = cfg.graph.fixture;
  } else {
    graph["n"] = cfg.graph.n;
    graph["in_degree"] = cfg.graph.in_degree;
    if (cfg.graph.seed) graph["seed"] = *cfg.graph.seed;
  }
  j["graph"] = graph;
  j["policy"] = std::string(to_string(cfg.policy.kind));
  if (cfg.msr_d_explicit) j["msr_d"] = cfg.policy.msr_d;
  j["eta"] = cfg.policy.eta;
  j["literal_eq11"] = cfg.policy.literal_eq11;
  j["t_max"] = cfg.t_max;
  j["err"] = cfg.err;
  ordered_json init;
  init["mu"] = cfg.init.mu;
  init["sigma"] = cfg.init.sigma;
  if (cfg.init.seed) init["seed"] = *cfg.init.seed;
  j["init"] = init;
  ordered_json list = ordered_json::array();
  for (const auto& d : cfg.disruptors) {
    ordered_json item;
    item["spec"] = d.spec;
    if (d.node) item["node"] = *d.node;
    list.push_back(item);
  }
  j["disruptors"] = list;
  j["master_seed"] = cfg.master_seed;
  j["active_from"] = cfg.active_from;
  return j;
}

}  // namespace

std::string config_to_json(const RunConfig& config) {
  return config_json_value(config).dump(2) + "\n";
}

std::string options_to_json(const ExperimentOptions& options) {
  ordered_json j;
  j["master_seed"] = options.master_seed;
  j["runs"] = options.runs;
  j["t_max"] = options.t_max;
  j["eta"] = options.eta;
  j["err"] = options.err;
  j["literal_eq11"] = options.literal_eq11;
  j["policy"] = options.only_policy ? std::string(to_string(*options.only_policy)) : std::string("all");
  j["mu"] = options.mu;
  j["sigma"] = options.sigma;
  return j.dump(2) + "\n";
}

namespace {

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, std::string_view header) : path_(path) {
    buffer_.reserve(1 << 16);
    buffer_.append(header);
    buffer_.push_back('\n');
  }

  template <typename... Fields>
  void row(const Fields&... fields) {
    std::size_t k = 0;
    ((append(fields), buffer_.push_back(++k == sizeof...(Fields) ? '\n' : ',')), ...);
    ++rows_;
  }

  WrittenFile close() {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path_.string() + " for writing");
    out.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    if (!out) throw IoError("write failed: " + path_.string());
    return {path_.filename().string(), rows_, content_hash(buffer_)};
  }

 private:
  void append(double v) { buffer_ += format_double(v); }
  void append(std::size_t v) { buffer_ += std::to_string(v); }
  void append(int v) { buffer_ += std::to_string(v); }
  void append(const std::string& v) { buffer_ += v; }

  std::filesystem::path path_;
  std::string buffer_;
  std::size_t rows_ = 0;
};

}  // namespace

std::vector<WrittenFile> write_outputs(const std::vector<RunRecord>& records,
                                       const std::vector<BatchSummary>& summaries,
                                       const std::filesystem::path& out_dir,
                                       const ManifestInfo& info) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  CsvFile trajectories(out_dir / "trajectories.csv", "run_id,t,node,value,is_disruptor");
  CsvFile metrics(out_dir / "metrics.csv", "run_id,t,cm,cm_allnodes_norm");
  for (const RunRecord& rec : records) {
    for (std::size_t t = 0; t < rec.trajectories.size(); ++t) {
      const auto& row = rec.trajectories[t];
      for (std::size_t i = 0; i < row.size(); ++i) {
        trajectories.row(rec.run_id, t, i, row[i], rec.disruptor_mask[i] ? 1 : 0);
      }
      metrics.row(rec.run_id, t, rec.cm.cm.at(t), rec.cm.cm_all_nodes.at(t));
    }
  }
  CsvFile summary(out_dir / "summary.csv", "batch_param,policy,t,mean_cm,min_cm,max_cm");
  for (const BatchSummary& s : summaries) {
    const std::string label = policy_label(s.policy);
    for (std::size_t t = 0; t < s.mean_cm.size(); ++t) {
      summary.row(s.batch_param, label, t, s.mean_cm[t], s.min_cm[t], s.max_cm[t]);
    }
  }

  std::vector<WrittenFile> files{trajectories.close(), metrics.close(), summary.close()};

  ordered_json manifest;
  manifest["tool"] = "oddic";
  manifest["version"] = ODDIC_VERSION;
  manifest["command"] = info.command;
  manifest["master_seed"] = info.master_seed;
  manifest["config"] = info.config_json.empty() ? ordered_json::object() : ordered_json::parse(info.config_json);
  manifest["fixtures"] = info.fixtures;
  ordered_json runs = ordered_json::array();
  for (const RunRecord& rec : records) {
    ordered_json r;
    r["run_id"] = rec.run_id;
    r["batch_index"] = rec.batch_index;
    r["run_index"] = rec.run_index;
    r["policy"] = policy_label(rec.policy);
    r["seeds"] = {{"graph", rec.seeds.graph}, {"init", rec.seeds.init}, {"identity", rec.seeds.identity}};
    ordered_json ds = ordered_json::array();
    for (const auto& d : rec.disruptors) ds.push_back({{"node", d.node}, {"spec", d.spec_name}});
    r["disruptors"] = ds;
    r["td0"] = format_double(rec.cm.td0);
    r["floor"] = format_double(rec.cm.floor);
    r["exact_consensus"] = rec.cm.exact_consensus;
    runs.push_back(r);
  }
  manifest["runs"] = runs;
  ordered_json file_list = ordered_json::object();
  for (const auto& f : files) file_list[f.name] = {{"rows", f.rows}, {"hash", f.hash}};
  manifest["files"] = file_list;

  const std::string text = manifest.dump(2) + "\n";
  const auto path = out_dir / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
  files.push_back({"manifest.json", 0, content_hash(text)});
  return files;
}

}  // namespace oddic
