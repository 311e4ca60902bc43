#include "oddic/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "oddic/errors.hpp"
#include "oddic/fixtures.hpp"
#include "oddic/random.hpp"

namespace oddic {

std::uint64_t noise_subseed(std::uint64_t master_seed, std::uint64_t batch_index,
                            std::uint64_t run_index, std::string_view disruptor_name) {
  std::string label(kNoiseStream);
  label += '/';
  label += disruptor_name;
  return derive_subseed(master_seed, batch_index, run_index, label);
}

std::vector<double> sample_initial_values(std::size_t n, double mu, double sigma, RandomStream& rng) {
  if (!(sigma >= 0.0)) {
    throw ParameterError("sigma must be non-negative");
  }
  std::vector<double> values;
  values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) values.push_back(rng.normal(mu, sigma));
  return values;
}

std::vector<NodeId> sample_identities(std::size_t n, std::size_t count, RandomStream& rng) {
  if (count > n) {
    throw ParameterError("cannot pick " + std::to_string(count) + " distinct nodes out of " +
                         std::to_string(n));
  }
  std::vector<NodeId> pool(n);
  std::iota(pool.begin(), pool.end(), NodeId{0});
  for (std::size_t k = 0; k < count; ++k) {
    std::swap(pool[k], pool[k + rng.uniform_index(n - k)]);
  }
  pool.resize(count);
  return pool;
}

void validate(const RunConfig& config) {
  auto fail = [](const std::string& rule) { throw ConfigError("invalid config: " + rule); };
  if (!(config.policy.eta > 0.0 && config.policy.eta <= 1.0)) fail("eta must lie in (0, 1]");
  if (config.t_max < 1) fail("t_max must be >= 1");
  if (!(config.err > 0.0) || !std::isfinite(config.err)) fail("err must be a positive finite number");
  if (!(config.init.sigma >= 0.0) || !std::isfinite(config.init.sigma)) fail("init.sigma must be >= 0");
  if (!std::isfinite(config.init.mu)) fail("init.mu must be finite");
  if (config.active_from < 1) fail("active_from must be >= 1");
  if (config.graph.fixture.empty()) {
    if (config.graph.n < 2) fail("graph.n must be >= 2");
    if (config.graph.in_degree < 1 || config.graph.in_degree > config.graph.n - 1) {
      fail("graph.in_degree must lie in [1, n - 1]");
    }
    if (config.disruptors.size() >= config.graph.n) fail("|disruptors| must be < n");
  }
  std::set<NodeId> pinned;
  for (const auto& d : config.disruptors) {
    if (d.spec.empty()) fail("disruptor spec reference must not be empty");
    if (d.node && !pinned.insert(*d.node).second) {
      fail("disruptor node " + std::to_string(*d.node) + " assigned twice");
    }
  }
}

RunRecord simulate(const Scenario& scenario) {
  const std::size_t n = scenario.graph.size();
  if (scenario.initial.size() != n) {
    throw ParameterError("initial state size does not match graph size");
  }
  for (double v : scenario.initial) {
    if (!std::isfinite(v)) throw NonFiniteStateError("non-finite initial value");
  }

  RunRecord record;
  record.policy = scenario.policy;
  record.disruptors = scenario.disruptors;
  record.disruptor_mask.assign(n, false);
  for (const auto& d : scenario.disruptors) {
    if (d.node >= n) throw ParameterError("disruptor node out of range");
    if (d.trajectory.active_from < 1) throw ParameterError("disruptor activation must be >= 1");
    if (d.trajectory.values.size() < scenario.t_max + 1) {
      throw ParameterError("disruptor trajectory shorter than t_max + 1");
    }
    record.disruptor_mask[d.node] = true;
  }

  OpinionVector state{scenario.initial, 0, record.disruptor_mask};
  record.trajectories.reserve(scenario.t_max + 1);
  record.trajectories.push_back(state.values);

  std::vector<Broadcast> broadcasts;
  for (std::size_t t = 0; t < scenario.t_max; ++t) {
    broadcasts.clear();
    for (const auto& d : scenario.disruptors) {
      if (d.trajectory.active_at(t + 1)) broadcasts.push_back({d.node, d.trajectory.values[t + 1]});
    }
    state = step(scenario.graph, state, scenario.policy, broadcasts);
    record.trajectories.push_back(state.values);
  }
  record.cm = convergence_series(record.trajectories, record.disruptor_mask, scenario.err);
  return record;
}

RunRecord run_single(const RunConfig& config, const FixtureStore& store) {
  validate(config);
  const std::uint64_t master = config.master_seed;

  RunSeeds seeds;
  Scenario scenario;
  if (!config.graph.fixture.empty()) {
    scenario.graph = store.graph(config.graph.fixture);
  } else {
    seeds.graph = config.graph.seed.value_or(derive_subseed(master, 0, 0, kGraphStream));
    RandomStream rng(seeds.graph);
    scenario.graph = generate_random_digraph(config.graph.n, config.graph.in_degree, rng);
  }
  const std::size_t n = scenario.graph.size();
  if (config.disruptors.size() >= n) {
    throw ConfigError("invalid config: |disruptors| must be < n (" + std::to_string(n) + ")");
  }

  seeds.init = config.init.seed.value_or(derive_subseed(master, 0, 0, kInitStream));
  RandomStream init_rng(seeds.init);
  scenario.initial = sample_initial_values(n, config.init.mu, config.init.sigma, init_rng);

  // Pinned identities first, then random ones drawn from the remaining nodes.
  std::vector<NodeId> free_nodes;
  std::vector<char> taken(n, 0);
  for (const auto& d : config.disruptors) {
    if (d.node) {
      if (*d.node >= n) {
        throw ConfigError("invalid config: disruptor node " + std::to_string(*d.node) + " out of range");
      }
      taken[*d.node] = 1;
    }
  }
  for (NodeId i = 0; i < n; ++i) {
    if (!taken[i]) free_nodes.push_back(i);
  }
  const auto random_count = static_cast<std::size_t>(std::count_if(
      config.disruptors.begin(), config.disruptors.end(), [](const auto& d) { return !d.node; }));
  seeds.identity = derive_subseed(master, 0, 0, kIdentityStream);
  RandomStream identity_rng(seeds.identity);
  const auto picks = sample_identities(free_nodes.size(), random_count, identity_rng);

  const InitialStats stats = initial_stats(scenario.initial);
  std::size_t next_pick = 0;
  for (std::size_t k = 0; k < config.disruptors.size(); ++k) {
    const auto& a = config.disruptors[k];
    const DisruptorSpec spec = store.disruptor(a.spec);
    RandomStream noise(noise_subseed(master, 0, k, spec.name));
    AssignedDisruptor d;
    d.node = a.node ? *a.node : free_nodes[picks[next_pick++]];
    d.spec_name = spec.name;
    d.trajectory = precompute_trajectory(spec, config.t_max, stats.mean, stats.range, noise, config.active_from);
    scenario.disruptors.push_back(std::move(d));
  }

  scenario.policy = config.policy;
  if (scenario.policy.kind == PolicyKind::msr && !config.msr_d_explicit) {
    scenario.policy.msr_d = config.disruptors.size();
  }
  scenario.t_max = config.t_max;
  scenario.err = config.err;

  RunRecord record = simulate(scenario);
  record.run_id = "run-" + policy_label(scenario.policy) + "-0";
  record.seeds = seeds;
  return record;
}

BatchSummary summarize(double batch_param, const Policy& policy,
                       const std::vector<const RunRecord*>& records) {
  BatchSummary summary;
  summary.batch_param = batch_param;
  summary.policy = policy;
  summary.runs = records.size();
  if (records.empty()) return summary;
  const std::size_t steps = records.front()->cm.cm.size();
  summary.mean_cm.assign(steps, 0.0);
  summary.min_cm.assign(steps, 0.0);
  summary.max_cm.assign(steps, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    double sum = 0.0;
    double lo = records.front()->cm.cm.at(t);
    double hi = lo;
    for (const RunRecord* rec : records) {
      const double v = rec->cm.cm.at(t);
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    // Clamp guards the mean against rounding outside [min, max].
    summary.mean_cm[t] = std::clamp(sum / static_cast<double>(records.size()), lo, hi);
    summary.min_cm[t] = lo;
    summary.max_cm[t] = hi;
  }
  return summary;
}

std::vector<const RunRecord*> ExperimentResult::select(std::size_t batch_index, PolicyKind kind) const {
  std::vector<const RunRecord*> out;
  for (const auto& rec : records) {
    if (rec.batch_index == batch_index && rec.policy.kind == kind) out.push_back(&rec);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RunRecord* a, const RunRecord* b) { return a->run_index < b->run_index; });
  return out;
}

namespace {

std::vector<Policy> comparison_policies(const ExperimentOptions& options, PolicyKind baseline,
                                        std::size_t msr_d) {
  std::vector<Policy> out;
  for (PolicyKind kind : {PolicyKind::oddic, baseline}) {
    if (options.only_policy && *options.only_policy != kind) continue;
    Policy p;
    p.kind = kind;
    p.eta = options.eta;
    p.literal_eq11 = options.literal_eq11;
    if (kind == PolicyKind::msr) p.msr_d = msr_d;
    out.push_back(p);
  }
  return out;
}

void check_options(const ExperimentOptions& options) {
  if (!(options.eta > 0.0 && options.eta <= 1.0)) throw ConfigError("invalid option: eta must lie in (0, 1]");
  if (options.t_max < 1) throw ConfigError("invalid option: t_max must be >= 1");
  if (!(options.err > 0.0)) throw ConfigError("invalid option: err must be positive");
  if (!(options.sigma >= 0.0)) throw ConfigError("invalid option: sigma must be >= 0");
}

void run_batch(ExperimentResult& result, const std::string& prefix, std::size_t batch_index,
               std::size_t run_index, Scenario scenario, const RunSeeds& seeds,
               const std::vector<Policy>& policies) {
  for (const Policy& policy : policies) {
    scenario.policy = policy;
    RunRecord rec = simulate(scenario);
    rec.run_id = prefix + "-" + policy_label(policy) + "-" + std::to_string(run_index);
    rec.batch_index = batch_index;
    rec.run_index = run_index;
    rec.seeds = seeds;
    result.records.push_back(std::move(rec));
  }
}

void add_summaries(ExperimentResult& result, const std::vector<std::vector<Policy>>& policies_per_batch) {
  for (std::size_t b = 0; b < result.batch_params.size(); ++b) {
    for (const Policy& policy : policies_per_batch[b]) {
      result.summaries.push_back(summarize(result.batch_params[b], policy, result.select(b, policy.kind)));
    }
  }
}

// Shared by experiments 2 and 3: random 20-node graph of fixed in-degree,
// random initial values and random disruptor identities per run.
constexpr std::size_t kMonteCarloNodes = 20;

struct RandomRun {
  Scenario scenario;
  RunSeeds seeds;
};

RandomRun random_run(const ExperimentOptions& options, std::size_t batch, std::size_t run,
                     std::size_t in_degree, const std::vector<AssignedDisruptor>& behaviours) {
  const std::uint64_t master = options.master_seed;
  RandomRun out;
  out.seeds.graph = derive_subseed(master, batch, run, kGraphStream);
  out.seeds.init = derive_subseed(master, batch, run, kInitStream);
  out.seeds.identity = derive_subseed(master, batch, run, kIdentityStream);

  RandomStream graph_rng(out.seeds.graph);
  out.scenario.graph = generate_random_digraph(kMonteCarloNodes, in_degree, graph_rng);
  RandomStream init_rng(out.seeds.init);
  out.scenario.initial = sample_initial_values(kMonteCarloNodes, options.mu, options.sigma, init_rng);
  RandomStream identity_rng(out.seeds.identity);
  const auto ids = sample_identities(kMonteCarloNodes, behaviours.size(), identity_rng);
  for (std::size_t k = 0; k < behaviours.size(); ++k) {
    AssignedDisruptor d = behaviours[k];
    d.node = ids[k];
    out.scenario.disruptors.push_back(std::move(d));
  }
  out.scenario.t_max = options.t_max;
  out.scenario.err = options.err;
  return out;
}

// Behaviour of `spec` precomputed from the initial values of (batch, run 0)
// and replayed unchanged by every later run that includes it.
AssignedDisruptor generating_run_behaviour(const ExperimentOptions& options, const DisruptorSpec& spec,
                                           std::size_t batch) {
  RandomStream init_rng(derive_subseed(options.master_seed, batch, 0, kInitStream));
  const auto initial = sample_initial_values(kMonteCarloNodes, options.mu, options.sigma, init_rng);
  const InitialStats stats = initial_stats(initial);
  RandomStream noise(noise_subseed(options.master_seed, batch, 0, spec.name));
  AssignedDisruptor d;
  d.spec_name = spec.name;
  d.trajectory = precompute_trajectory(spec, options.t_max, stats.mean, stats.range, noise);
  return d;
}

}  // namespace

ExperimentResult run_experiment1(const FixtureStore& store, const ExperimentOptions& options) {
  check_options(options);
  struct Case {
    const char* fixture;
    const char* table;
    double mu;
    double sigma;
    std::vector<NodeId> disruptor_nodes;
  };
  // Disruptors sit on nodes 1 and 7 (7-node) and 4 and 12 (15-node), 1-based.
  const std::vector<Case> cases = {
      {"exp1_7node", "EXP1_7", 50.5, 24.75, {0, 6}},
      {"exp1_15node", "EXP1_15", 8.0, 7.0, {3, 11}},
  };

  ExperimentResult result;
  result.name = "exp1";
  result.options = options;
  std::vector<std::vector<Policy>> policies_per_batch;
  for (std::size_t b = 0; b < cases.size(); ++b) {
    const Case& c = cases[b];
    const Digraph graph = store.graph(c.fixture);
    const auto specs = store.table(c.table);
    result.batch_params.push_back(static_cast<double>(graph.size()));
    const auto policies = comparison_policies(options, PolicyKind::mean, 0);
    policies_per_batch.push_back(policies);
    const std::string prefix = "n" + std::to_string(graph.size());

    for (std::size_t r = 0; r < options.runs; ++r) {
      RunSeeds seeds;
      seeds.init = derive_subseed(options.master_seed, b, r, kInitStream);
      Scenario scenario;
      scenario.graph = graph;
      RandomStream init_rng(seeds.init);
      scenario.initial = sample_initial_values(graph.size(), c.mu, c.sigma, init_rng);
      const InitialStats stats = initial_stats(scenario.initial);
      for (std::size_t k = 0; k < specs.size(); ++k) {
        RandomStream noise(noise_subseed(options.master_seed, b, r, specs[k].name));
        AssignedDisruptor d;
        d.node = c.disruptor_nodes.at(k);
        d.spec_name = specs[k].name;
        d.trajectory = precompute_trajectory(specs[k], options.t_max, stats.mean, stats.range, noise);
        scenario.disruptors.push_back(std::move(d));
      }
      scenario.t_max = options.t_max;
      scenario.err = options.err;
      run_batch(result, prefix, b, r, std::move(scenario), seeds, policies);
    }
  }
  add_summaries(result, policies_per_batch);
  return result;
}

ExperimentResult run_experiment2(const FixtureStore& store, const ExperimentOptions& options) {
  check_options(options);
  constexpr std::size_t kKnownDisruptors = 5;
  const auto specs = store.table("EXP2");

  ExperimentResult result;
  result.name = "exp2";
  result.options = options;

  // All five behaviours come from the very first run (in-degree 3, run 0).
  std::vector<AssignedDisruptor> behaviours;
  for (const auto& spec : specs) behaviours.push_back(generating_run_behaviour(options, spec, 0));

  std::vector<std::vector<Policy>> policies_per_batch;
  for (std::size_t in_degree = 3, b = 0; in_degree <= 15; in_degree += 2, ++b) {
    result.batch_params.push_back(static_cast<double>(in_degree));
    const auto policies = comparison_policies(options, PolicyKind::msr, kKnownDisruptors);
    policies_per_batch.push_back(policies);
    const std::string prefix = "deg" + std::to_string(in_degree);
    for (std::size_t r = 0; r < options.runs; ++r) {
      auto run = random_run(options, b, r, in_degree, behaviours);
      run_batch(result, prefix, b, r, std::move(run.scenario), run.seeds, policies);
    }
  }
  add_summaries(result, policies_per_batch);
  return result;
}

ExperimentResult run_experiment3(const FixtureStore& store, const ExperimentOptions& options) {
  check_options(options);
  constexpr std::size_t kInDegree = 6;
  const auto specs = store.table("EXP3");

  ExperimentResult result;
  result.name = "exp3";
  result.options = options;

  // D_k is generated by run 0 of batch |D| = k, the first batch containing it.
  std::vector<AssignedDisruptor> behaviours;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    behaviours.push_back(generating_run_behaviour(options, specs[k], k + 1));
  }

  std::vector<std::vector<Policy>> policies_per_batch;
  for (std::size_t count = 0; count <= specs.size(); ++count) {
    const std::size_t b = count;
    result.batch_params.push_back(static_cast<double>(count));
    const auto policies = comparison_policies(options, PolicyKind::msr, count);
    policies_per_batch.push_back(policies);
    const std::vector<AssignedDisruptor> active(behaviours.begin(),
                                                behaviours.begin() + static_cast<std::ptrdiff_t>(count));
    const std::string prefix = "d" + std::to_string(count);
    for (std::size_t r = 0; r < options.runs; ++r) {
      auto run = random_run(options, b, r, kInDegree, active);
      run_batch(result, prefix, b, r, std::move(run.scenario), run.seeds, policies);
    }
  }
  add_summaries(result, policies_per_batch);
  return result;
}

}  // namespace oddic
