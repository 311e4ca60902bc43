// Command-line driver: single runs from a config file, the three Monte Carlo
// experiments, and the exhaustive robustness check for fixtures.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "oddic/errors.hpp"
#include "oddic/experiments.hpp"
#include "oddic/fixtures.hpp"
#include "oddic/io.hpp"
#include "oddic/robustness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotRobust = 1;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string policy;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> t_max;
  bool literal_eq11 = false;
  std::string data_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_runs) {
  cmd->add_option("--seed", flags.seed, "Master seed");
  cmd->add_option("--out", flags.out, "Output directory (default: out/<command>)");
  cmd->add_option("--policy", flags.policy, "Restrict to one policy: oddic, msr or mean");
  if (with_runs) cmd->add_option("--runs", flags.runs, "Monte Carlo runs per batch");
  cmd->add_option("--tmax", flags.t_max, "Number of synchronous steps");
  cmd->add_flag("--literal-eq11", flags.literal_eq11,
                "Debug: update away from the filtered mean instead of toward it");
  cmd->add_option("--data-dir", flags.data_dir, "Fixture directory (default: bundled data)");
}

oddic::FixtureStore make_store(const CommonFlags& flags) {
  return flags.data_dir.empty() ? oddic::FixtureStore() : oddic::FixtureStore(flags.data_dir);
}

void report(const std::string& out_dir, const std::vector<oddic::WrittenFile>& files) {
  for (const auto& f : files) {
    std::cout << out_dir << "/" << f.name;
    if (f.name != "manifest.json") std::cout << "  (" << f.rows << " rows)";
    std::cout << "\n";
  }
}

int cmd_run(const std::string& config_path, const CommonFlags& flags) {
  oddic::RunConfig config = oddic::load_config(config_path);
  if (flags.seed) config.master_seed = *flags.seed;
  if (!flags.policy.empty()) config.policy.kind = oddic::parse_policy_kind(flags.policy);
  if (flags.t_max) config.t_max = *flags.t_max;
  if (flags.literal_eq11) config.policy.literal_eq11 = true;
  oddic::validate(config);

  const auto store = make_store(flags);
  const oddic::RunRecord record = oddic::run_single(config, store);
  const std::vector<oddic::RunRecord> records{record};
  const std::vector<oddic::BatchSummary> summaries{oddic::summarize(0.0, record.policy, {&records.front()})};

  const std::string out = flags.out.empty() ? "out/run" : flags.out;
  const auto files = oddic::write_outputs(
      records, summaries, out, {"run", config.master_seed, oddic::config_to_json(config), store.used_files()});
  if (record.cm.exact_consensus) {
    std::cout << "initial values identical: convergence metric undefined (exact consensus)\n";
  } else {
    std::cout << "final cm " << oddic::format_double(record.cm.cm.back()) << " (floor "
              << oddic::format_double(record.cm.floor) << ")\n";
  }
  report(out, files);
  return kExitOk;
}

int cmd_experiment(const std::string& name, const CommonFlags& flags, double mu, double sigma) {
  oddic::ExperimentOptions options;
  if (flags.seed) options.master_seed = *flags.seed;
  if (flags.runs) options.runs = *flags.runs;
  if (flags.t_max) options.t_max = *flags.t_max;
  if (!flags.policy.empty()) options.only_policy = oddic::parse_policy_kind(flags.policy);
  options.literal_eq11 = flags.literal_eq11;
  options.mu = mu;
  options.sigma = sigma;

  const auto store = make_store(flags);
  oddic::ExperimentResult result;
  if (name == "exp1") {
    result = oddic::run_experiment1(store, options);
  } else if (name == "exp2") {
    result = oddic::run_experiment2(store, options);
  } else {
    result = oddic::run_experiment3(store, options);
  }

  for (const auto& s : result.summaries) {
    if (s.mean_cm.empty()) continue;
    std::cout << "batch " << oddic::format_double(s.batch_param) << "  " << oddic::policy_label(s.policy)
              << "  final mean cm " << oddic::format_double(s.mean_cm.back()) << "  [min "
              << oddic::format_double(s.min_cm.back()) << ", max " << oddic::format_double(s.max_cm.back())
              << "]\n";
  }
  const std::string out = flags.out.empty() ? "out/" + name : flags.out;
  const auto files = oddic::write_outputs(
      result.records, result.summaries, out,
      {name, options.master_seed, oddic::options_to_json(options), store.used_files()});
  report(out, files);
  return kExitOk;
}

int cmd_robustness(const std::string& fixture, int r, int s, std::size_t limit, const std::string& data_dir) {
  const oddic::FixtureStore store = data_dir.empty() ? oddic::FixtureStore() : oddic::FixtureStore(data_dir);
  const oddic::Digraph g = store.graph(fixture);
  const auto violation = oddic::find_robustness_violation(g, r, s, limit);
  if (!violation) {
    std::cout << fixture << " (" << g.size() << " nodes) is (" << r << "," << s << ")-robust\n";
    return kExitOk;
  }
  auto print_set = [&](std::uint64_t mask) {
    std::cout << "{";
    bool first = true;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (mask >> i & 1U) {
        std::cout << (first ? "" : ",") << i;
        first = false;
      }
    }
    std::cout << "}";
  };
  std::cout << fixture << " (" << g.size() << " nodes) is NOT (" << r << "," << s << ")-robust; witness S1=";
  print_set(violation->first);
  std::cout << " S2=";
  print_set(violation->second);
  std::cout << "\n";
  return kExitNotRobust;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilient consensus simulator: ODDI-C, MSR and mean-based policies"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string config_path;
  auto* run = app.add_subcommand("run", "Simulate a single run described by a JSON config");
  run->add_option("config", config_path, "RunConfig JSON file")->required();
  add_common(run, flags, false);

  double mu = 50.5;
  double sigma = 24.75;
  std::vector<CLI::App*> experiments;
  for (const char* name : {"exp1", "exp2", "exp3"}) {
    auto* cmd = app.add_subcommand(name, std::string("Run experiment ") + name[3]);
    add_common(cmd, flags, true);
    if (name[3] != '1') {
      cmd->add_option("--mu", mu, "Mean of the initial-value distribution")->capture_default_str();
      cmd->add_option("--sigma", sigma, "Std-dev of the initial-value distribution")->capture_default_str();
    }
    experiments.push_back(cmd);
  }

  std::string fixture;
  int r = 1;
  int s = 1;
  std::size_t limit = oddic::kDefaultExhaustiveLimit;
  std::string robustness_data_dir;
  auto* robust = app.add_subcommand("robustness", "Exhaustive (r,s)-robustness check of a graph fixture");
  robust->add_option("fixture", fixture, "Bundled fixture name or path to a .json fixture")->required();
  robust->add_option("r", r, "r >= 1")->required();
  robust->add_option("s", s, "s >= 1")->required();
  robust->add_option("--limit", limit, "Maximum node count for exhaustive search")->capture_default_str();
  robust->add_option("--data-dir", robustness_data_dir, "Fixture directory (default: bundled data)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, flags);
    for (auto* cmd : experiments) {
      if (cmd->parsed()) return cmd_experiment(cmd->get_name(), flags, mu, sigma);
    }
    if (robust->parsed()) return cmd_robustness(fixture, r, s, limit, robustness_data_dir);
  } catch (const oddic::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const oddic::ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const oddic::InfeasibleCheckError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const oddic::NonFiniteStateError& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const oddic::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
