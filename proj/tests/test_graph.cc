/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_graph.cc
 */
#include <gtest/gtest.h>
#include <mpgraph/graph.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "test_util.h"

namespace mpg {
namespace {

using testing::G3;
using Triple = std::tuple<NodeId, NodeId, EdgeId>;

std::multiset<Triple> CooTriples(const Graph& g) {
  std::multiset<Triple> s;
  for (size_t e = 0; e < g.NumEdges(); ++e) s.insert({g.Src()[e], g.Dst()[e], EdgeId(e)});
  return s;
}

std::multiset<Triple> FromAdj(const CompactAdjacency& a, bool rows_are_src) {
  std::multiset<Triple> s;
  for (size_t r = 0; r + 1 < a.indptr.size(); ++r)
    for (uint64_t p = a.indptr[r]; p < a.indptr[r + 1]; ++p) {
      if (rows_are_src) {
        s.insert({NodeId(r), a.indices[p], a.edge_ids[p]});
      } else {
        s.insert({a.indices[p], NodeId(r), a.edge_ids[p]});
      }
    }
  return s;
}

TEST(Graph, BuildAssignsIdsInOrder) {
  Graph g = G3();
  EXPECT_EQ(g.NumNodes(), 3u);
  EXPECT_EQ(g.NumEdges(), 3u);
  EXPECT_EQ(g.Src()[2], 2u);
  EXPECT_EQ(g.Dst()[2], 0u);
  EXPECT_FALSE(g.HasCsr());
  EXPECT_FALSE(g.HasCsc());

  Graph lone(1, {}, {});
  EXPECT_EQ(lone.NumNodes(), 1u);
  EXPECT_EQ(lone.NumEdges(), 0u);

  Graph multi(2, {0, 0}, {1, 1});
  EXPECT_EQ(multi.NumEdges(), 2u);
  EXPECT_EQ(multi.InDegrees(std::vector<NodeId>{1})[0], 2u);
}

TEST(Graph, OutOfRangeEndpointNamesEdge) {
  try {
    Graph(2, {0, 1, 0}, {1, 5, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRange);
    EXPECT_NE(std::string(e.what()).find("edge 1"), std::string::npos) << e.what();
  }
}

TEST(Graph, CsrCscOfG3) {
  Graph g = G3();
  const auto& csr = g.Csr();
  EXPECT_EQ(csr.indptr, (std::vector<uint64_t>{0, 1, 2, 3}));
  EXPECT_EQ(csr.indices, (std::vector<NodeId>{2, 2, 0}));
  EXPECT_EQ(csr.edge_ids, (std::vector<EdgeId>{0, 1, 2}));
  const auto& csc = g.Csc();
  EXPECT_EQ(csc.indptr, (std::vector<uint64_t>{0, 1, 1, 3}));
  EXPECT_EQ(csc.indices, (std::vector<NodeId>{2, 0, 1}));
  EXPECT_EQ(csc.edge_ids, (std::vector<EdgeId>{2, 0, 1}));
  // cached
  EXPECT_EQ(&g.Csr(), &csr);
  EXPECT_EQ(g.ConversionCount(), 2u);
}

TEST(Graph, EmptyGraphAdjacency) {
  Graph g(4, {}, {});
  EXPECT_EQ(g.Csr().indptr, (std::vector<uint64_t>(5, 0)));
  EXPECT_TRUE(g.Csc().indices.empty());
}

TEST(Graph, ReverseSharesIdsAndCaches) {
  Graph g = G3();
  Graph r = g.Reverse();
  EXPECT_NE(r.Id(), g.Id());
  EXPECT_EQ(r.Src()[0], 2u);
  EXPECT_EQ(r.Dst()[0], 0u);
  EXPECT_EQ(r.Src()[2], 0u);
  EXPECT_EQ(r.Dst()[2], 2u);
  EXPECT_EQ(r.Reverse().Id(), g.Id());
  EXPECT_TRUE(r.Reverse().SameEdges(g));

  const uint64_t before = g.ConversionCount();
  const CompactAdjacency& csr = g.Csr();
  EXPECT_EQ(&r.Csc(), &csr);
  EXPECT_EQ(g.ConversionCount(), before + 1);

  Graph loop(1, {0}, {0});
  EXPECT_TRUE(loop.Reverse().SameEdges(loop));
}

TEST(Graph, RandomRoundTripsAndDuality) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = testing::RandomGraph(rng, 64, 512);
    const auto coo = CooTriples(g);
    EXPECT_EQ(FromAdj(g.Csr(), true), coo);
    EXPECT_EQ(FromAdj(g.Csc(), false), coo);
    const auto& rc = g.Reverse().Csr();
    const auto& c = g.Csc();
    ASSERT_EQ(rc.indptr, c.indptr);
    EXPECT_EQ(rc.indices, c.indices);
    EXPECT_EQ(rc.edge_ids, c.edge_ids);
    for (const auto* a : {&g.Csr(), &g.Csc()})
      for (size_t r = 0; r + 1 < a->indptr.size(); ++r)
        for (uint64_t p = a->indptr[r] + 1; p < a->indptr[r + 1]; ++p)
          EXPECT_LT(std::make_pair(a->indices[p - 1], a->edge_ids[p - 1]),
                    std::make_pair(a->indices[p], a->edge_ids[p]));
    uint64_t in = 0, out = 0;
    for (auto d : g.InDegrees()) in += d;
    for (auto d : g.OutDegrees()) out += d;
    EXPECT_EQ(in, g.NumEdges());
    EXPECT_EQ(out, g.NumEdges());
  }
}

TEST(Graph, BatchedDegrees) {
  Graph g = G3();
  EXPECT_EQ(g.InDegrees(std::vector<NodeId>{0, 1, 2}), (std::vector<uint64_t>{1, 0, 2}));
  EXPECT_TRUE(g.InDegrees(std::vector<NodeId>{}).empty());
  EXPECT_THROW(g.InDegrees(std::vector<NodeId>{3}), Error);
}

TEST(Graph, NeighborSampleSmallCases) {
  Graph g = G3();
  std::vector<NodeId> s2{2};
  Subgraph all = NeighborSample(g, s2, 5, 1);
  std::vector<EdgeId> pe = all.parent_edge_ids;
  std::sort(pe.begin(), pe.end());
  EXPECT_EQ(pe, (std::vector<EdgeId>{0, 1}));
  EXPECT_EQ(all.parent_node_ids[0], 2u);

  std::vector<NodeId> s1{1};
  Subgraph none = NeighborSample(g, s1, 3, 1);
  EXPECT_EQ(none.graph.NumNodes(), 1u);
  EXPECT_EQ(none.graph.NumEdges(), 0u);

  std::set<EdgeId> seen;
  for (uint64_t seed = 0; seed < 64; ++seed) {
    Subgraph one = NeighborSample(g, s2, 1, seed);
    ASSERT_EQ(one.parent_edge_ids.size(), 1u);
    seen.insert(one.parent_edge_ids[0]);
    Subgraph again = NeighborSample(g, s2, 1, seed);
    EXPECT_EQ(again.parent_edge_ids, one.parent_edge_ids);
  }
  EXPECT_EQ(seen, (std::set<EdgeId>{0, 1}));

  std::vector<NodeId> bad{9};
  EXPECT_THROW(NeighborSample(g, bad, 1, 0), Error);
}

TEST(Graph, SampledEdgesMatchParent) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = testing::RandomGraph(rng, 40, 300);
    std::vector<NodeId> seeds{0, static_cast<NodeId>(g.NumNodes() - 1)};
    Subgraph s = NeighborSample(g, seeds, 3, trial);
    for (size_t e = 0; e < s.graph.NumEdges(); ++e) {
      const EdgeId pe = s.parent_edge_ids[e];
      EXPECT_EQ(s.parent_node_ids[s.graph.Src()[e]], g.Src()[pe]);
      EXPECT_EQ(s.parent_node_ids[s.graph.Dst()[e]], g.Dst()[pe]);
    }
    std::set<NodeId> uniq(s.parent_node_ids.begin(), s.parent_node_ids.end());
    EXPECT_EQ(uniq.size(), s.parent_node_ids.size());
    for (NodeId seed : std::set<NodeId>(seeds.begin(), seeds.end())) {
      const uint64_t deg = g.InDegrees(std::vector<NodeId>{seed})[0];
      size_t got = 0;
      for (size_t e = 0; e < s.graph.NumEdges(); ++e)
        got += g.Dst()[s.parent_edge_ids[e]] == seed;
      EXPECT_EQ(got, std::min<uint64_t>(deg, 3));
    }
  }
}

TEST(Graph, EdgeListAndBinaryRoundTrip) {
  std::mt19937_64 rng(11);
  Graph g = testing::RandomGraph(rng, 20, 60);
  std::stringstream text;
  WriteEdgeList(g, text);
  Graph t = ReadEdgeList(text);
  EXPECT_EQ(t.NumNodes(), g.NumNodes());
  EXPECT_TRUE(t.SameEdges(g));

  std::stringstream bin;
  WriteBinary(g, bin);
  Graph b = ReadBinary(bin);
  EXPECT_EQ(b.NumNodes(), g.NumNodes());
  EXPECT_TRUE(b.SameEdges(g));

  std::stringstream plain("# comment\n0\t3\n2 1\n\n");
  Graph p = ReadEdgeList(plain);
  EXPECT_EQ(p.NumNodes(), 4u);
  EXPECT_EQ(p.NumEdges(), 2u);

  std::stringstream broken("0\t1\nx\t2\n");
  try {
    ReadEdgeList(broken);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  std::stringstream bad_magic("GRF2xxxxxxxxxxxxxxxx");
  EXPECT_THROW(ReadBinary(bad_magic), Error);
}

}  // namespace
}  // namespace mpg
