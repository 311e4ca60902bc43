// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Thresholds below are fixed and must not be tuned.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oddic/consensus.hpp"
#include "oddic/experiments.hpp"
#include "oddic/fixtures.hpp"
#include "oddic/io.hpp"
#include "oddic/metrics.hpp"
#include "oddic/random.hpp"
#include "oddic/robustness.hpp"
#include "oracles.hpp"

namespace {

using oddic::PolicyKind;

constexpr std::size_t kSeeds = 50;
constexpr std::uint64_t kMasterSeed = 1;

constexpr double kWeakValidityBudget = 1.0;
constexpr std::size_t kExp1MinFloored = 45;
constexpr std::size_t kExp1MinMeanUnfloored = 45;
constexpr double kExp1MeanPolicyFinalCm = 1e-2;
constexpr double kExp1Budget = 10.0;
constexpr double kExp1FifteenMedianHit = 20.0;
constexpr double kExp2MsrDegree3FinalCm = 1e-1;
constexpr double kExp23Budget = 120.0;
constexpr std::size_t kContractionRuns = 1000;
constexpr std::size_t kOracleMultisets = 10000;
constexpr double kOracleRelTol = 1e-12;
constexpr std::size_t kMsrDegenerationConfigs = 100;
constexpr double kRobustnessBudget = 30.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Never-floored runs count as t_max + 1.
double median_first_hit(const std::vector<const oddic::RunRecord*>& runs, std::size_t t_max) {
  std::vector<double> hits;
  for (const auto* r : runs) {
    const auto h = r->cm.first_floor_hit();
    hits.push_back(h ? static_cast<double>(*h) : static_cast<double>(t_max + 1));
  }
  std::sort(hits.begin(), hits.end());
  const std::size_t n = hits.size();
  return n % 2 == 1 ? hits[n / 2] : (hits[n / 2 - 1] + hits[n / 2]) / 2.0;
}

double final_mean_cm(const oddic::ExperimentResult& res, std::size_t batch, PolicyKind kind) {
  for (const auto& s : res.summaries) {
    if (s.batch_param == res.batch_params[batch] && s.policy.kind == kind) return s.mean_cm.back();
  }
  return NAN;
}

oddic::ExperimentOptions default_options() {
  oddic::ExperimentOptions o;
  o.master_seed = kMasterSeed;
  o.runs = kSeeds;
  return o;
}

// Criterion: all-compliant networks with identical initial values never move.
Outcome weak_validity() {
  const auto start = Clock::now();
  const oddic::FixtureStore store;
  std::vector<oddic::Digraph> graphs{store.graph("exp1_7node"), store.graph("exp1_15node")};
  oddic::RandomStream rng(11);
  for (std::size_t k = 1; k < 20; k += 3) graphs.push_back(oddic::generate_random_digraph(20, k, rng));

  std::size_t checked = 0;
  for (const auto& g : graphs) {
    for (const double c : {0.0, 8.0, 50.5, -1234.5678, 1e-300}) {
      for (const oddic::Policy policy : {oddic::Policy{PolicyKind::oddic}, oddic::Policy{PolicyKind::msr, 0},
                                         oddic::Policy{PolicyKind::msr, 3}, oddic::Policy{PolicyKind::mean}}) {
        oddic::OpinionVector s{std::vector<double>(g.size(), c), 0, {}};
        for (std::size_t t = 0; t < oddic::kDefaultTMax; ++t) {
          s = oddic::step(g, s, policy);
          for (double v : s.values) {
            if (v != c) return {false, "value moved from " + fmt(c) + " at t=" + std::to_string(s.t)};
          }
        }
        ++checked;
      }
    }
  }
  const double secs = seconds_since(start);
  return {secs < kWeakValidityBudget,
          std::to_string(checked) + " runs constant for 40 steps; " + fmt(secs) + " s"};
}

struct Exp1Outcomes {
  Outcome seven;
  Outcome fifteen;
};

Exp1Outcomes experiment1() {
  const auto start = Clock::now();
  const oddic::FixtureStore store;
  const auto opts = default_options();
  const auto res = oddic::run_experiment1(store, opts);
  const double secs = seconds_since(start);

  std::size_t floored = 0;
  for (const auto* r : res.select(0, PolicyKind::oddic)) {
    const auto h = r->cm.first_floor_hit();
    if (h && *h <= opts.t_max) ++floored;
  }
  std::size_t mean_unfloored = 0;
  for (const auto* r : res.select(0, PolicyKind::mean)) {
    if (r->cm.cm.back() > kExp1MeanPolicyFinalCm) ++mean_unfloored;
  }
  Exp1Outcomes out;
  out.seven.pass = floored >= kExp1MinFloored && mean_unfloored >= kExp1MinMeanUnfloored && secs < kExp1Budget;
  out.seven.detail = "ODDI-C floored in " + std::to_string(floored) + "/" + std::to_string(kSeeds) +
                     " (need " + std::to_string(kExp1MinFloored) + "); mean policy final CM > " +
                     fmt(kExp1MeanPolicyFinalCm) + " in " + std::to_string(mean_unfloored) + "/" +
                     std::to_string(kSeeds) + "; " + fmt(secs) + " s";

  const double median = median_first_hit(res.select(1, PolicyKind::oddic), opts.t_max);
  out.fifteen.pass = median <= kExp1FifteenMedianHit && secs < kExp1Budget;
  out.fifteen.detail = "median first floor hit " +
                       (median > static_cast<double>(opts.t_max) ? std::string("never (>40)") : fmt(median)) +
                       " steps (need <= " + fmt(kExp1FifteenMedianHit) + "); " + fmt(secs) + " s";
  return out;
}

Outcome experiment2() {
  const auto start = Clock::now();
  const oddic::FixtureStore store;
  const auto res = oddic::run_experiment2(store, default_options());
  const double secs = seconds_since(start);

  bool ok = true;
  std::string detail = "final mean CM oddic/msr5:";
  for (std::size_t b = 0; b < res.batch_params.size(); ++b) {
    const double a = final_mean_cm(res, b, PolicyKind::oddic);
    const double m = final_mean_cm(res, b, PolicyKind::msr);
    if (!(a <= m)) ok = false;
    detail += " k" + fmt(res.batch_params[b]) + "=" + fmt(a) + "/" + fmt(m) + (a <= m ? "" : "(!)");
  }
  const double msr3 = final_mean_cm(res, 0, PolicyKind::msr);
  ok = ok && msr3 > kExp2MsrDegree3FinalCm && secs < kExp23Budget;
  detail += "; msr5 at in-degree 3 = " + fmt(msr3) + " (need > " + fmt(kExp2MsrDegree3FinalCm) + "); " +
            fmt(secs) + " s";
  return {ok, detail};
}

Outcome experiment3() {
  const auto start = Clock::now();
  const oddic::FixtureStore store;
  const auto opts = default_options();
  const auto res = oddic::run_experiment3(store, opts);
  const double secs = seconds_since(start);

  bool ok = true;
  std::string detail = "final mean CM oddic/msr:";
  for (std::size_t b = 0; b < res.batch_params.size(); ++b) {
    const double a = final_mean_cm(res, b, PolicyKind::oddic);
    const double m = final_mean_cm(res, b, PolicyKind::msr);
    if (!(a <= m)) ok = false;
    detail += " D" + fmt(res.batch_params[b]) + "=" + fmt(a) + "/" + fmt(m) + (a <= m ? "" : "(!)");
  }
  const double hit_msr = median_first_hit(res.select(0, PolicyKind::msr), opts.t_max);
  const double hit_oddic = median_first_hit(res.select(0, PolicyKind::oddic), opts.t_max);
  const auto show = [&](double h) {
    return h > static_cast<double>(opts.t_max) ? std::string("never") : fmt(h);
  };
  // MSR must actually floor, and no later than ODDI-C.
  const bool order = hit_msr <= static_cast<double>(opts.t_max) && hit_msr <= hit_oddic;
  ok = ok && order && secs < kExp23Budget;
  detail += "; |D|=0 median first floor hit msr " + show(hit_msr) + " vs oddic " + show(hit_oddic) + "; " +
            fmt(secs) + " s";
  return {ok, detail};
}

Outcome range_contraction() {
  oddic::RandomStream meta(2718);
  for (std::size_t run = 0; run < kContractionRuns; ++run) {
    const std::size_t n = 3 + meta.uniform_index(23);
    const std::size_t k = 1 + meta.uniform_index(n - 1);
    oddic::RandomStream rng(meta.next_u64());
    const auto g = oddic::generate_random_digraph(n, k, rng);
    const double sigma = std::pow(10.0, static_cast<double>(meta.uniform_index(9)) - 4.0);
    oddic::OpinionVector s{oddic::sample_initial_values(n, rng.normal(0, 100), sigma, rng), 0,
                           std::vector<bool>(n, false)};
    auto prev = oddic::compliant_range(s);
    for (std::size_t t = 0; t < oddic::kDefaultTMax; ++t) {
      s = oddic::step(g, s, oddic::Policy{});
      const auto cur = oddic::compliant_range(s);
      if (cur.max > prev.max || cur.min < prev.min || cur.range > prev.range) {
        return {false, "run " + std::to_string(run) + " expanded at t=" + std::to_string(s.t)};
      }
      prev = cur;
    }
  }
  return {true, std::to_string(kContractionRuns) + " runs x 40 steps, max/min/range monotone exactly"};
}

bool close(double a, double b) {
  if (a == b) return true;
  return std::fabs(a - b) <= kOracleRelTol * std::max(std::fabs(a), std::fabs(b));
}

Outcome oracle_equivalence() {
  oddic::RandomStream rng(31415);
  double worst = 0.0;
  for (std::size_t trial = 0; trial < kOracleMultisets; ++trial) {
    std::vector<double> v(1 + rng.uniform_index(40));
    const double scale = std::pow(10.0, static_cast<double>(rng.uniform_index(9)) - 4.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = (i > 0 && rng.uniform01() < 0.15) ? v[rng.uniform_index(i)] : rng.normal(0, scale);
    }
    const double own = v[rng.uniform_index(v.size())];
    const auto p = oddic::filter_params({v, own});
    const auto ref = oddic::oracle::reference_filter(v, own);
    const double td = oddic::total_difference(v);
    const double td_ref = oddic::oracle::double_loop_total_difference(v);
    if (!close(p.median, ref.median) || !close(p.mad, ref.mad) || !close(p.nmad, ref.nmad) ||
        !close(p.filter_value, ref.filter) || !close(td, td_ref)) {
      return {false, "mismatch on multiset " + std::to_string(trial)};
    }
    if (td_ref > 0) worst = std::max(worst, std::fabs(td - td_ref) / td_ref);
  }
  return {true, std::to_string(kOracleMultisets) + " multisets; worst TD relative error " + fmt(worst)};
}

Outcome msr_degeneration() {
  const oddic::FixtureStore store;
  const auto specs = store.table("EXP2");
  oddic::RandomStream meta(1618);
  for (std::size_t trial = 0; trial < kMsrDegenerationConfigs; ++trial) {
    oddic::RunConfig c;
    c.graph.n = 3 + meta.uniform_index(23);
    c.graph.in_degree = 1 + meta.uniform_index(c.graph.n - 1);
    c.init = {meta.normal(50, 30), std::fabs(meta.normal(0, 25)), std::nullopt};
    c.master_seed = meta.next_u64();
    const std::size_t d = meta.uniform_index(std::min<std::size_t>(specs.size(), c.graph.n - 1) + 1);
    for (std::size_t k = 0; k < d; ++k) c.disruptors.push_back({specs[k].name, std::nullopt});
    c.policy.kind = PolicyKind::mean;
    const auto mean = oddic::run_single(c, store);
    c.policy.kind = PolicyKind::msr;
    c.policy.msr_d = 0;
    c.msr_d_explicit = true;
    const auto msr = oddic::run_single(c, store);
    if (mean.trajectories != msr.trajectories) {
      return {false, "trajectories differ on config " + std::to_string(trial)};
    }
  }
  return {true, std::to_string(kMsrDegenerationConfigs) + " configs bit-identical"};
}

Outcome robustness_fixtures() {
  const auto start = Clock::now();
  const oddic::FixtureStore store;
  const bool seven = oddic::check_rs_robustness(store.graph("exp1_7node"), 3, 3);
  const bool fifteen = oddic::check_rs_robustness(store.graph("exp1_15node"), 3, 2);
  const bool k4 = oddic::check_rs_robustness(oddic::Digraph::complete(4), 2, 1);
  const double secs = seconds_since(start);
  return {seven && fifteen && k4 && secs < kRobustnessBudget,
          std::string("7-node (3,3): ") + (seven ? "yes" : "no") + "; 15-node (3,2): " + (fifteen ? "yes" : "no") +
              "; K4 (2,1): " + (k4 ? "yes" : "no") + "; " + fmt(secs) + " s"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "oddic_acceptance_determinism";
  fs::remove_all(root);
  const auto opts = default_options();
  using Runner = oddic::ExperimentResult (*)(const oddic::FixtureStore&, const oddic::ExperimentOptions&);
  const std::pair<const char*, Runner> experiments[] = {
      {"exp1", oddic::run_experiment1}, {"exp2", oddic::run_experiment2}, {"exp3", oddic::run_experiment3}};
  std::size_t compared = 0;
  for (const auto& [name, runner] : experiments) {
    for (const char* pass : {"a", "b"}) {
      const oddic::FixtureStore store;
      const auto res = runner(store, opts);
      oddic::write_outputs(res.records, res.summaries, root / name / pass,
                           {name, opts.master_seed, oddic::options_to_json(opts), store.used_files()});
    }
    for (const char* f : {"trajectories.csv", "metrics.csv", "summary.csv", "manifest.json"}) {
      if (slurp(root / name / "a" / f) != slurp(root / name / "b" / f)) {
        return {false, std::string(name) + "/" + f + " differs between reruns"};
      }
      ++compared;
    }
  }
  fs::remove_all(root);
  return {true, std::to_string(compared) + " output files byte-identical across reruns"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* name, const Outcome& o) {
    std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  auto guarded = [](const std::function<Outcome()>& f) -> Outcome {
    try {
      return f();
    } catch (const std::exception& e) {
      return {false, std::string("exception: ") + e.what()};
    }
  };

  report("weak-validity", guarded(weak_validity));
  Exp1Outcomes e1;
  try {
    e1 = experiment1();
  } catch (const std::exception& e) {
    e1.seven = e1.fifteen = {false, std::string("exception: ") + e.what()};
  }
  report("experiment1-7node", e1.seven);
  report("experiment1-15node", e1.fifteen);
  report("experiment2", guarded(experiment2));
  report("experiment3", guarded(experiment3));
  report("range-contraction", guarded(range_contraction));
  report("oracle-equivalence", guarded(oracle_equivalence));
  report("msr-degeneration", guarded(msr_degeneration));
  report("robustness-fixtures", guarded(robustness_fixtures));
  report("determinism", guarded(determinism));

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
