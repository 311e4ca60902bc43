// Property tests over hand-rolled random inputs. Each generator draws from a
// RandomStream so failures are reproducible from the printed trial seed.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "oddic/consensus.hpp"
#include "oddic/metrics.hpp"
#include "oddic/random.hpp"
#include "oracles.hpp"

namespace {

using oddic::Digraph;
using oddic::NeighborhoodSample;
using oddic::OpinionVector;
using oddic::Policy;
using oddic::PolicyKind;
using oddic::RandomStream;

// Mixes continuous draws with repeated values so ties and degenerate MADs occur.
std::vector<double> random_multiset(RandomStream& rng, std::size_t n) {
  std::vector<double> v(n);
  const double scale = std::pow(10.0, static_cast<double>(rng.uniform_index(7)) - 3.0);
  for (auto& x : v) {
    if (rng.uniform01() < 0.2 && &x != v.data()) {
      x = v[rng.uniform_index(static_cast<std::uint64_t>(&x - v.data()))];
    } else {
      x = rng.normal(0.0, scale);
    }
  }
  return v;
}

bool close(double a, double b) {
  return a == b || std::fabs(a - b) <= 1e-12 * std::max(std::fabs(a), std::fabs(b));
}

NeighborhoodSample random_sample(RandomStream& rng) {
  auto v = random_multiset(rng, 1 + rng.uniform_index(20));
  const double own = v[rng.uniform_index(v.size())];
  return {std::move(v), own};
}

TEST(ConsensusProperty, FilterParamsMatchSortOracle) {
  RandomStream rng(101);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = random_sample(rng);
    const auto p = oddic::filter_params(s);
    const auto ref = oddic::oracle::reference_filter(s.values, s.own);
    // Even-size medians may differ from (a + b) / 2 in the last bit.
    ASSERT_TRUE(close(p.median, ref.median)) << p.median << " vs " << ref.median;
    ASSERT_TRUE(close(p.mad, ref.mad));
    ASSERT_TRUE(close(p.nmad, ref.nmad));
    ASSERT_TRUE(close(p.filter_value, ref.filter));
  }
}

TEST(ConsensusProperty, FilterValueInZeroToThree) {
  RandomStream rng(102);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto p = oddic::filter_params(random_sample(rng));
    ASSERT_GE(p.filter_value, 0.0);
    ASSERT_LE(p.filter_value, oddic::kFilterMax);
  }
}

TEST(ConsensusProperty, AcceptedSetExcludesOwnAndHighScores) {
  RandomStream rng(103);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = random_sample(rng);
    const auto p = oddic::filter_params(s);
    const auto z = oddic::zscores(s, p);
    const auto f = oddic::dynamic_filter(s, z, p);
    for (double v : f) {
      ASSERT_LT(oddic::zscore(v, p), p.filter_value);
      ASSERT_NE(v, s.own);  // own and its duplicates score exactly the raw filter
    }
    const auto expected = static_cast<std::size_t>(
        std::count_if(z.begin(), z.end(), [&](double x) { return x < p.filter_value; }));
    ASSERT_EQ(f.size(), expected);
  }
}

TEST(ConsensusProperty, UpdateStaysBetweenOwnAndFilteredMean) {
  RandomStream rng(104);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = random_sample(rng);
    const double eta = 0.05 + 0.95 * rng.uniform_closed01();
    for (PolicyKind kind : {PolicyKind::oddic, PolicyKind::msr, PolicyKind::mean}) {
      const double next = oddic::update_node(s, Policy{kind, rng.uniform_index(4), eta});
      const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
      ASSERT_GE(next, *lo);
      ASSERT_LE(next, *hi);
    }
  }
}

TEST(ConsensusProperty, MsrFilterKeepsOwnAndTrimsAtMostD) {
  RandomStream rng(105);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = random_sample(rng);
    const std::size_t d = rng.uniform_index(6);
    const auto f = oddic::msr_filter(s, d);
    ASSERT_TRUE(std::find(f.begin(), f.end(), s.own) != f.end());
    ASSERT_GE(f.size() + 2 * d, s.values.size());
  }
}

TEST(ConsensusProperty, MsrZeroEqualsMeanPolicy) {
  RandomStream rng(106);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto s = random_sample(rng);
    ASSERT_EQ(oddic::update_node(s, Policy{PolicyKind::msr, 0}), oddic::update_node(s, Policy{PolicyKind::mean}));
  }
}

TEST(ConsensusProperty, StepIsPermutationEquivariant) {
  RandomStream rng(107);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(15);
    const auto g = oddic::generate_random_digraph(n, 1 + rng.uniform_index(n - 1), rng);
    const OpinionVector s{random_multiset(rng, n), 0, {}};
    std::vector<oddic::NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
    OpinionVector ps{std::vector<double>(n), 0, {}};
    for (std::size_t i = 0; i < n; ++i) ps.values[perm[i]] = s.values[i];
    for (PolicyKind kind : {PolicyKind::oddic, PolicyKind::msr, PolicyKind::mean}) {
      const Policy policy{kind, 1};
      const auto out = oddic::step(g, s, policy);
      const auto pout = oddic::step(g.relabeled(perm), ps, policy);
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(pout.values[perm[i]], out.values[i]);
    }
  }
}

TEST(ConsensusProperty, EqualStatesAreFixedPoints) {
  RandomStream rng(108);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(20);
    const auto g = oddic::generate_random_digraph(n, 1 + rng.uniform_index(n - 1), rng);
    const double c = rng.normal(0.0, 1e3);
    OpinionVector s{std::vector<double>(n, c), 0, {}};
    for (int t = 0; t < 5; ++t) s = oddic::step(g, s, Policy{});
    for (double v : s.values) ASSERT_EQ(v, c);
  }
}

// CM itself is not monotone: TD can grow while the range shrinks (a spread
// cluster splitting into two tight ones). The envelope n^2 r[t] / (2 TD0)
// bounds it and is monotone because the range is.
TEST(ConsensusProperty, DisruptorFreeCmHasMonotoneEnvelope) {
  RandomStream rng(109);
  std::size_t increases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.uniform_index(20);
    const auto g = oddic::generate_random_digraph(n, 1 + rng.uniform_index(n - 1), rng);
    OpinionVector s{random_multiset(rng, n), 0, std::vector<bool>(n, false)};
    std::vector<std::vector<double>> traj{s.values};
    std::vector<double> range{oddic::compliant_range(s).range};
    for (int t = 0; t < 30; ++t) {
      s = oddic::step(g, s, Policy{});
      traj.push_back(s.values);
      range.push_back(oddic::compliant_range(s).range);
    }
    const auto cm = oddic::convergence_series(traj, s.disruptor_mask);
    if (cm.exact_consensus) continue;
    const double nn = static_cast<double>(n * n);
    for (std::size_t t = 0; t < cm.cm.size(); ++t) {
      const double envelope = nn * range[t] / (2.0 * cm.td0);
      ASSERT_LE(cm.cm[t], std::max(envelope, cm.floor) * (1 + 1e-12));
      if (t > 0) {
        ASSERT_LE(range[t], range[t - 1]);
        if (cm.cm[t] > cm.cm[t - 1]) ++increases;
      }
    }
  }
  RecordProperty("cm_increases", static_cast<int>(increases));
}

TEST(ConsensusProperty, CmCanRiseWhileRangeShrinks) {
  // Range contraction alone does not bound TD.
  const std::vector<double> before{0, 5, 5, 5, 5, 10};
  const std::vector<double> after{1, 1, 1, 9, 9, 9};
  EXPECT_LT(oddic::compliant_range({after, 0, {}}).range, oddic::compliant_range({before, 0, {}}).range);
  EXPECT_GT(oddic::total_difference(after), oddic::total_difference(before));
}

}  // namespace
