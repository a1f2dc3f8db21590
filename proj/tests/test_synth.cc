/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_synth.cc
 */
#include <gtest/gtest.h>
#include <mpgraph/synth.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace mpg {
namespace {

std::vector<uint64_t> CountInDegrees(const Graph& g) {
  std::vector<uint64_t> deg(g.NumNodes(), 0);
  for (NodeId v : g.Dst()) ++deg[v];
  return deg;
}

TEST(Synth, Chain) {
  Graph g = Generate(GenSpec::Parse("chain:n=4"));
  EXPECT_EQ(std::vector<NodeId>(g.Src().begin(), g.Src().end()), (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(std::vector<NodeId>(g.Dst().begin(), g.Dst().end()), (std::vector<NodeId>{1, 2, 3}));
  EXPECT_EQ(Generate(GenSpec::Parse("chain:n=1")).NumEdges(), 0u);
}

TEST(Synth, ConstantIndegree) {
  for (auto text : {"constant_indegree:n=100,k=32", "constant_indegree:n=33,k=32",
                    "constant_indegree:n=5000,k=3"}) {
    Graph g = Generate(GenSpec::Parse(text, 9));
    const auto deg = CountInDegrees(g);
    const uint64_t k = GenSpec::Parse(text).k;
    for (uint64_t d : deg) ASSERT_EQ(d, k) << text;
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (size_t e = 0; e < g.NumEdges(); ++e) {
      EXPECT_NE(g.Src()[e], g.Dst()[e]);
      EXPECT_TRUE(pairs.insert({g.Src()[e], g.Dst()[e]}).second) << "duplicate edge";
    }
  }
}

TEST(Synth, PowerLawHeavyTail) {
  Graph g = Generate(GenSpec::Parse("power_law:n=10000,deg=20", 0));
  EXPECT_EQ(g.NumEdges(), 9999u * 20u);
  const auto deg = CountInDegrees(g);
  const double mean = static_cast<double>(g.NumEdges()) / g.NumNodes();
  const uint64_t top = *std::max_element(deg.begin(), deg.end());
  EXPECT_GT(top, 4 * mean);
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    Graph h = Generate(GenSpec::Parse("power_law:n=1000,deg=5", seed));
    const auto d = CountInDegrees(h);
    EXPECT_GT(*std::max_element(d.begin(), d.end()), 4.0 * h.NumEdges() / h.NumNodes());
  }
  // Edges only point to earlier nodes.
  for (size_t e = 0; e < g.NumEdges(); ++e) ASSERT_LT(g.Dst()[e], g.Src()[e]);
}

TEST(Synth, ErdosRenyiDensity) {
  Graph g = Generate(GenSpec::Parse("erdos_renyi:n=300,p=0.05", 4));
  const double expected = 300.0 * 299.0 * 0.05;
  EXPECT_NEAR(static_cast<double>(g.NumEdges()), expected, 5 * std::sqrt(expected));
  for (size_t e = 0; e < g.NumEdges(); ++e) EXPECT_NE(g.Src()[e], g.Dst()[e]);
  EXPECT_EQ(Generate(GenSpec::Parse("erdos_renyi:n=6,p=1")).NumEdges(), 30u);
}

TEST(Synth, SeedDeterminism) {
  for (auto text : {"power_law:n=500,deg=4", "constant_indegree:n=200,k=7",
                    "erdos_renyi:n=100,p=0.1"}) {
    Graph a = Generate(GenSpec::Parse(text, 11));
    Graph b = Generate(GenSpec::Parse(text, 11));
    Graph c = Generate(GenSpec::Parse(text, 12));
    EXPECT_TRUE(std::equal(a.Src().begin(), a.Src().end(), b.Src().begin(), b.Src().end()));
    EXPECT_TRUE(std::equal(a.Dst().begin(), a.Dst().end(), b.Dst().begin(), b.Dst().end()));
    EXPECT_FALSE(std::equal(a.Dst().begin(), a.Dst().end(), c.Dst().begin(), c.Dst().end()) &&
                 std::equal(a.Src().begin(), a.Src().end(), c.Src().begin(), c.Src().end()))
        << text;
  }
}

TEST(Synth, ParseAndValidate) {
  GenSpec s = GenSpec::Parse("power_law:n=10,deg=3,seed=5", 1);
  EXPECT_EQ(s.kind, GraphKind::kPowerLaw);
  EXPECT_EQ(s.num_nodes, 10u);
  EXPECT_EQ(s.degree, 3u);
  EXPECT_EQ(s.seed, 5u);
  EXPECT_EQ(s.ToString(), "power_law:n=10,deg=3");
  for (auto bad : {"tree:n=3", "chain", "chain:n=0", "constant_indegree:n=5,k=5",
                   "constant_indegree:n=5,k=0", "power_law:n=5", "erdos_renyi:n=5,p=0",
                   "erdos_renyi:n=5,p=1.5", "chain:n=-3", "chain:n=4,q=1", "chain:n4"}) {
    try {
      GenSpec::Parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument) << bad;
    }
  }
}

}  // namespace
}  // namespace mpg
