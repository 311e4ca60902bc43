#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oddic/consensus.hpp"
#include "oddic/digraph.hpp"
#include "oddic/disruptors.hpp"
#include "oddic/metrics.hpp"

namespace oddic {

class FixtureStore;
class RandomStream;

inline constexpr std::size_t kDefaultTMax = 40;
inline constexpr std::size_t kDefaultRuns = 50;

// Stream labels fed to derive_subseed.
inline constexpr std::string_view kGraphStream = "graph";
inline constexpr std::string_view kInitStream = "init";
inline constexpr std::string_view kNoiseStream = "noise";
inline constexpr std::string_view kIdentityStream = "identity";

/// Seed for the noise substream of one named disruptor.
std::uint64_t noise_subseed(std::uint64_t master_seed, std::uint64_t batch_index,
                            std::uint64_t run_index, std::string_view disruptor_name);

/// n independent Normal(mu, sigma) draws. Throws ParameterError if sigma < 0.
std::vector<double> sample_initial_values(std::size_t n, double mu, double sigma, RandomStream& rng);

/// `count` distinct node indices drawn uniformly from [0, n), in draw order.
std::vector<NodeId> sample_identities(std::size_t n, std::size_t count, RandomStream& rng);

// ---------------------------------------------------------------------------
// Single-run configuration (the `run` subcommand and config files).

struct GraphSource {
  std::string fixture;  // bundled name or path; empty for a generated graph
  std::size_t n = 0;
  std::size_t in_degree = 0;
  std::optional<std::uint64_t> seed;  // derived from master_seed when absent

  friend bool operator==(const GraphSource&, const GraphSource&) = default;
};

struct InitSource {
  double mu = 0.0;
  double sigma = 0.0;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const InitSource&, const InitSource&) = default;
};

struct DisruptorAssignment {
  std::string spec;           // "TABLE/ROW"
  std::optional<NodeId> node; // random identity when absent

  friend bool operator==(const DisruptorAssignment&, const DisruptorAssignment&) = default;
};

struct RunConfig {
  GraphSource graph;
  Policy policy;               // policy.eta is the learning rate
  bool msr_d_explicit = false; // otherwise MSR uses d = |disruptors|
  std::size_t t_max = kDefaultTMax;
  double err = kDefaultErr;
  InitSource init;
  std::vector<DisruptorAssignment> disruptors;
  std::uint64_t master_seed = 0;
  std::size_t active_from = kDefaultActivationStep;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ConfigError naming the first violated rule.
void validate(const RunConfig& config);

// ---------------------------------------------------------------------------
// Resolved scenario and run output.

struct AssignedDisruptor {
  NodeId node = 0;
  std::string spec_name;
  DisruptorTrajectory trajectory;
  friend bool operator==(const AssignedDisruptor&, const AssignedDisruptor&) = default;
};

struct Scenario {
  Digraph graph;
  std::vector<double> initial;
  std::vector<AssignedDisruptor> disruptors;
  Policy policy;
  std::size_t t_max = kDefaultTMax;
  double err = kDefaultErr;
};

struct RunSeeds {
  std::uint64_t graph = 0;
  std::uint64_t init = 0;
  std::uint64_t identity = 0;

  friend bool operator==(const RunSeeds&, const RunSeeds&) = default;
};

struct RunRecord {
  std::string run_id;
  std::size_t batch_index = 0;
  std::size_t run_index = 0;
  Policy policy;
  std::vector<std::vector<double>> trajectories;  // [t][node], t = 0..t_max
  ConvergenceSeries cm;
  std::vector<bool> disruptor_mask;
  std::vector<AssignedDisruptor> disruptors;
  RunSeeds seeds;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Steps 1..t_max of one scenario. Disruptors follow the policy until their
/// trajectory activates, then broadcast it. Throws NonFiniteStateError.
RunRecord simulate(const Scenario& scenario);

/// Resolves fixtures and seeds of a config, then simulates it.
RunRecord run_single(const RunConfig& config, const FixtureStore& store);

// ---------------------------------------------------------------------------
// Monte Carlo experiments.

struct BatchSummary {
  double batch_param = 0.0;  // in-degree, |D|, or node count
  Policy policy;
  std::size_t runs = 0;
  std::vector<double> mean_cm;
  std::vector<double> min_cm;
  std::vector<double> max_cm;
};

/// Per-step mean/min/max of cm, folded in the given record order.
BatchSummary summarize(double batch_param, const Policy& policy,
                       const std::vector<const RunRecord*>& records);

struct ExperimentOptions {
  std::uint64_t master_seed = 1;
  std::size_t runs = kDefaultRuns;
  std::size_t t_max = kDefaultTMax;
  double eta = kDefaultEta;
  double err = kDefaultErr;
  bool literal_eq11 = false;
  std::optional<PolicyKind> only_policy;  // run just one side of each comparison
  // Initial-value distribution for experiments 2 and 3.
  double mu = 50.5;
  double sigma = 24.75;
};

struct ExperimentResult {
  std::string name;
  ExperimentOptions options;
  std::vector<double> batch_params;
  std::vector<RunRecord> records;
  std::vector<BatchSummary> summaries;

  /// Records of one batch under one policy kind, in run order.
  std::vector<const RunRecord*> select(std::size_t batch_index, PolicyKind kind) const;
};

/// 7-node (two sine disruptors) and 15-node (linear + noise) fixtures, each
/// under ODDI-C and the unfiltered mean policy on identical inputs.
/// Batch 0 is the 7-node network, batch 1 the 15-node one.
ExperimentResult run_experiment1(const FixtureStore& store, const ExperimentOptions& options);

/// n = 20, five disruptors, in-degree 3, 5, ..., 15; ODDI-C vs MSR(d = 5).
ExperimentResult run_experiment2(const FixtureStore& store, const ExperimentOptions& options);

/// n = 20, in-degree 6, |D| = 0..8; ODDI-C vs MSR(d = |D|).
ExperimentResult run_experiment3(const FixtureStore& store, const ExperimentOptions& options);

}  // namespace oddic
