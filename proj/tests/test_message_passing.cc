/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_message_passing.cc
 */
#include <gtest/gtest.h>
#include <mpgraph/dispatch_log.h>
#include <mpgraph/memory.h>
#include <mpgraph/message_passing.h>

#include "test_util.h"

namespace mpg {
namespace {

using testing::G3;

TEST(UpdateAll, CopySumOnG3) {
  GraphFrame f(G3());
  f.SetNodeData("x", FeatureMatrix::FromRows({{1}, {2}, {3}}));
  DispatchCapture cap;
  f.UpdateAll(fn::CopyU("x", "m"), fn::Sum("m", "h"));
  EXPECT_EQ(f.ndata().Get("h"), FeatureMatrix::FromRows({{3}, {0}, {3}}));
  ASSERT_EQ(cap.Count(), 1u);
  EXPECT_EQ(cap.Records()[0].kernel, "gspmm");
}

TEST(UpdateAll, EmptyGraphAndTwoHops) {
  GraphFrame empty(Graph(3, {}, {}));
  empty.SetNodeData("x", FeatureMatrix(3, 2, 1.0));
  empty.UpdateAll(fn::CopyU("x", "m"), fn::Sum("m", "h"));
  EXPECT_EQ(empty.ndata().Get("h"), FeatureMatrix(3, 2, 0.0));

  std::mt19937_64 rng(1);
  Graph g = testing::RandomGraph(rng, 20, 70);
  GraphFrame f(g);
  FeatureMatrix x = testing::RandomMatrix(rng, g.NumNodes(), 3);
  f.SetNodeData("x", x);
  f.UpdateAll(fn::CopyU("x", "m"), fn::Sum("m", "h1"));
  f.UpdateAll(fn::CopyU("h1", "m"), fn::Sum("m", "h2"));
  FeatureMatrix at = Transpose(testing::DenseAdjacency(g));
  EXPECT_LT(testing::RelErr(f.ndata().Get("h2"), MatMul(at, MatMul(at, x))), 1e-12);
}

TEST(UpdateAll, Errors) {
  GraphFrame f(G3());
  f.SetNodeData("x", FeatureMatrix(3, 1));
  try {
    f.UpdateAll(fn::CopyU("nope", "m"), fn::Sum("m", "h"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLookup);
  }
  EXPECT_THROW(f.UpdateAll(fn::CopyU("x", "m"), fn::Sum("other", "h")), Error);
  EXPECT_THROW(f.SetNodeData("bad", FeatureMatrix(2, 1)), Error);
}

TEST(ApplyEdges, DotAndCopy) {
  GraphFrame f(G3());
  f.SetNodeData("x", FeatureMatrix::FromRows({{1, 0}, {0, 1}, {1, 1}}));
  f.ApplyEdges(fn::UDotV("x", "x", "score"));
  EXPECT_EQ(f.edata().Get("score"), FeatureMatrix::FromRows({{1}, {1}, {1}}));
  f.SetEdgeData("w", FeatureMatrix::FromRows({{4}, {5}, {6}}));
  f.ApplyEdges(fn::CopyE("w", "w2"));
  EXPECT_EQ(f.edata().Get("w2"), f.edata().Get("w"));
}

TEST(ApplyEdges, LinkScoresAreEndpointDots) {
  std::mt19937_64 rng(2);
  Graph g = testing::RandomGraph(rng, 30, 90);
  GraphFrame f(g);
  FeatureMatrix h = testing::RandomMatrix(rng, g.NumNodes(), 8);
  f.SetNodeData("h", h);
  f.ApplyEdges(fn::UDotV("h", "h", "s"));
  FeatureMatrix hh = MatMulNT(h, h);
  for (size_t e = 0; e < g.NumEdges(); ++e)
    EXPECT_NEAR(f.edata().Get("s")(e, 0), hh(g.Src()[e], g.Dst()[e]), 1e-12);
}

TEST(UpdateAll, TapedThroughFrame) {
  std::mt19937_64 rng(3);
  Graph g = testing::RandomGraph(rng, 10, 30, 3);
  FeatureMatrix x0 = testing::RandomMatrix(rng, g.NumNodes(), 2);
  FeatureMatrix w0 = testing::RandomMatrix(rng, g.NumEdges(), 2);
  FeatureMatrix probe = testing::RandomMatrix(rng, g.NumNodes(), 2);
  auto fun = [&](Tape& t, const std::vector<Var>& v) {
    GraphFrame f(g, &t);
    f.BindNodeData("x", v[0]);
    f.BindEdgeData("w", v[1]);
    Var h = f.UpdateAll(fn::UMulE("x", "w", "m"), fn::Mean("m", "h"));
    return ops::SumProduct(t, h, probe);
  };
  EXPECT_TRUE(GradCheck(fun, {x0, w0}).passed());
}

TEST(UpdateAll, FusedPathAllocatesNoEdgeMessages) {
  std::mt19937_64 rng(4);
  const size_t n = 1000;
  std::vector<NodeId> src, dst;
  std::uniform_int_distribution<NodeId> pick(0, n - 1);
  for (size_t e = 0; e < n * 30; ++e) {
    src.push_back(pick(rng));
    dst.push_back(pick(rng));
  }
  Graph g(n, src, dst);
  g.Csc();
  GraphFrame f(g);
  f.SetNodeData("x", testing::RandomMatrix(rng, n, 16));
  memory::PeakProbe probe;
  f.UpdateAll(fn::CopyU("x", "m"), fn::Max("m", "h"));
  EXPECT_LT(probe.PeakAuxBytes(), g.NumEdges() * 16 * sizeof(double) / 4);
}

// -- edge softmax ------------------------------------------------------------

TEST(EdgeSoftmax, SimpleCases) {
  Graph g(3, {0, 1, 2}, {2, 2, 0});
  GraphFrame f(g);
  f.SetEdgeData("s", FeatureMatrix::FromRows({{0.3}, {0.3}, {-4}}));
  f.EdgeSoftmax("s", "a");
  const auto& a = f.edata().Get("a");
  EXPECT_DOUBLE_EQ(a(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(a(1, 0), 0.5);
  EXPECT_EQ(a(2, 0), 1.0);
  EXPECT_THROW(f.EdgeSoftmax("missing", "b"), Error);
}

TEST(EdgeSoftmax, SumsToOneAndShiftInvariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Graph g = testing::RandomGraph(rng, 40, 300);
    FeatureMatrix s = testing::RandomMatrix(rng, g.NumEdges(), 3, -30, 30);
    GraphFrame f(g);
    f.SetEdgeData("s", s);
    f.EdgeSoftmax("s", "a");
    const auto& a = f.edata().Get("a");
    FeatureMatrix sums(g.NumNodes(), 3);
    for (size_t e = 0; e < g.NumEdges(); ++e)
      for (size_t c = 0; c < 3; ++c) sums(g.Dst()[e], c) += a(e, c);
    const auto deg = g.InDegrees();
    for (size_t v = 0; v < g.NumNodes(); ++v)
      for (size_t c = 0; c < 3; ++c)
        if (deg[v]) EXPECT_NEAR(sums(v, c), 1.0, 1e-12);
    FeatureMatrix shift = testing::RandomMatrix(rng, g.NumNodes(), 1, -50, 50);
    for (size_t e = 0; e < g.NumEdges(); ++e)
      for (size_t c = 0; c < 3; ++c) s(e, c) += shift(g.Dst()[e], 0);
    f.SetEdgeData("s2", s);
    f.EdgeSoftmax("s2", "a2");
    EXPECT_LT(testing::RelErr(f.edata().Get("a2"), a), 1e-12);
  }
}

TEST(EdgeSoftmax, GradCheckAndKernelsOnly) {
  std::mt19937_64 rng(6);
  Graph g = testing::RandomGraph(rng, 12, 40, 4);
  FeatureMatrix s = testing::RandomMatrix(rng, g.NumEdges(), 2, -2, 2);
  FeatureMatrix probe = testing::RandomMatrix(rng, g.NumEdges(), 2);
  auto fun = [&](Tape& t, const std::vector<Var>& v) {
    return ops::SumProduct(t, ops::EdgeSoftmax(t, g, v[0]), probe);
  };
  EXPECT_LT(GradCheck(fun, {s}).max_rel_error, 1e-5);

  Tape t;
  Var sv = t.Leaf(s, true);
  Var loss = ops::SumProduct(t, ops::EdgeSoftmax(t, g, sv), probe);
  DispatchCapture cap;
  t.Backward(loss);
  size_t kernels = 0;
  for (const auto& r : cap.Records()) {
    EXPECT_TRUE(r.kernel == "gspmm" || r.kernel == "gsddmm" || r.kernel == "dense")
        << r.ToString();
    kernels += r.kernel != "dense";
  }
  EXPECT_GE(kernels, 5u);
}

// -- degree bucketing ----------------------------------------------------------

FeatureMatrix CopySrcMessage(EdgeBatch& eb) { return eb.Src("x"); }

FeatureMatrix SumReduce(const NodeBatch& nb) {
  FeatureMatrix out(nb.nodes().size(), nb.message_dim());
  for (size_t i = 0; i < nb.nodes().size(); ++i)
    for (size_t j = 0; j < nb.degree(); ++j)
      for (size_t c = 0; c < nb.message_dim(); ++c) out(i, c) += nb.Message(i, j)[c];
  return out;
}

TEST(Udf, ProductReduceOnG3) {
  GraphFrame f(G3());
  f.SetNodeData("x", FeatureMatrix::FromRows({{2, 3}, {5, 7}, {11, 13}}));
  f.UpdateAllUdf(CopySrcMessage,
                 [](const NodeBatch& nb) {
                   FeatureMatrix out(nb.nodes().size(), nb.message_dim(), 1.0);
                   for (size_t i = 0; i < nb.nodes().size(); ++i)
                     for (size_t j = 0; j < nb.degree(); ++j)
                       for (size_t c = 0; c < nb.message_dim(); ++c)
                         out(i, c) *= nb.Message(i, j)[c];
                   return out;
                 },
                 "h");
  EXPECT_EQ(f.ndata().Get("h"), FeatureMatrix::FromRows({{11, 13}, {0, 0}, {10, 21}}));
}

TEST(Udf, RegularGraphHasOneBucket) {
  Graph g(4, {1, 2, 3, 0, 2, 3, 0, 1}, {0, 0, 1, 1, 2, 2, 3, 3});
  auto b = DegreeBuckets(g);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].degree, 2u);
  EXPECT_EQ(b[0].nodes, (std::vector<NodeId>{0, 1, 2, 3}));
}

TEST(Udf, BucketPartitionInvariants) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = testing::RandomGraph(rng, 64, 512);
    const auto deg = g.InDegrees();
    auto buckets = DegreeBuckets(g);
    size_t covered = 0, nonzero = 0;
    std::vector<int> seen(g.NumNodes(), 0);
    for (size_t i = 0; i < buckets.size(); ++i) {
      if (i) EXPECT_LT(buckets[i - 1].degree, buckets[i].degree);
      EXPECT_TRUE(std::is_sorted(buckets[i].nodes.begin(), buckets[i].nodes.end()));
      for (NodeId v : buckets[i].nodes) {
        EXPECT_EQ(deg[v], buckets[i].degree);
        ++seen[v];
      }
      covered += buckets[i].nodes.size();
    }
    for (size_t v = 0; v < g.NumNodes(); ++v) {
      nonzero += deg[v] > 0;
      EXPECT_EQ(seen[v], deg[v] > 0 ? 1 : 0);
    }
    EXPECT_EQ(covered, nonzero);
  }
}

TEST(Udf, MatchesFusedPath) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = testing::RandomGraph(rng, 30, 200);
    GraphFrame f(g);
    f.SetNodeData("x", testing::RandomMatrix(rng, g.NumNodes(), 3));
    f.SetEdgeData("w", testing::RandomMatrix(rng, g.NumEdges(), 3));
    f.UpdateAll(fn::UMulE("x", "w", "m"), fn::Sum("m", "fused"));
    f.UpdateAllUdf(
        [](EdgeBatch& eb) { return Hadamard(eb.Src("x"), eb.Edge("w")); }, SumReduce, "udf");
    EXPECT_LT(testing::RelErr(f.ndata().Get("udf"), f.ndata().Get("fused")), 1e-12);
  }
}

TEST(Udf, ShapeMismatchIsAnError) {
  GraphFrame f(G3());
  f.SetNodeData("x", FeatureMatrix(3, 2, 1.0));
  EXPECT_THROW(f.UpdateAllUdf(CopySrcMessage,
                              [](const NodeBatch&) { return FeatureMatrix(7, 2); }, "h"),
               Error);
  EXPECT_THROW(f.UpdateAllUdf([](EdgeBatch&) { return FeatureMatrix(1, 2); }, SumReduce, "h"),
               Error);
}

}  // namespace
}  // namespace mpg
