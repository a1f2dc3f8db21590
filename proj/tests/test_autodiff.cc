/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_autodiff.cc
 */
#include <gtest/gtest.h>
#include <mpgraph/autodiff.h>
#include <mpgraph/dispatch_log.h>
#include <mpgraph/ops.h>

#include "test_util.h"

namespace mpg {
namespace {

using testing::G3;

TEST(Backward, CopyEdgeGradientIsIdentity) {
  std::mt19937_64 rng(1);
  Graph g = G3();
  FeatureMatrix w = testing::RandomMatrix(rng, 3, 2);
  FeatureMatrix dm = testing::RandomMatrix(rng, 3, 2);
  NodeEdgeData d{nullptr, nullptr, &w};
  GradBundle b = GSDDMMBackward(g, MessageFunc::CopyRhs(Target::kEdge), d, dm);
  ASSERT_TRUE(b.dw);
  EXPECT_EQ(*b.dw, dm);
  EXPECT_FALSE(b.dx);
  EXPECT_FALSE(b.dy);
}

TEST(Backward, AddOnSingleEdgeRoutes) {
  Graph g(2, {0}, {1});
  FeatureMatrix x(2, 1, 0.3), y(2, 1, -0.7);
  FeatureMatrix dm = FeatureMatrix::FromRows({{5}});
  OperandGrads r =
      GSDDMMBackward(g, MessageFunc::Binary(BinaryOp::kAdd, Target::kSrc, Target::kDst), &x,
                     &y, dm);
  EXPECT_EQ(*r.lhs, FeatureMatrix::FromRows({{5}, {0}}));
  EXPECT_EQ(*r.rhs, FeatureMatrix::FromRows({{0}, {5}}));
}

TEST(Backward, MulSumOnG3) {
  FeatureMatrix x = FeatureMatrix::FromRows({{1}, {2}, {3}});
  FeatureMatrix w = FeatureMatrix::FromRows({{10}, {20}, {30}});
  FeatureMatrix dz(3, 1, 1.0);
  const auto phi = MessageFunc::Binary(BinaryOp::kMul, Target::kSrc, Target::kEdge);
  NodeEdgeData d{&x, nullptr, &w};
  Graph g = G3();
  auto fwd = GSpMM(g, phi, ReduceOp::kSum, d);
  GradBundle b = GSpMMBackward(g, phi, ReduceOp::kSum, d, fwd, dz);
  EXPECT_EQ(*b.dw, FeatureMatrix::FromRows({{1}, {2}, {3}}));
  EXPECT_EQ(*b.dx, FeatureMatrix::FromRows({{10}, {20}, {30}}));
}

TEST(Backward, CopySumIsAdjacencyTimesGradient) {
  std::mt19937_64 rng(2);
  Graph g = testing::RandomGraph(rng, 20, 80);
  FeatureMatrix x = testing::RandomMatrix(rng, g.NumNodes(), 3);
  FeatureMatrix dz = testing::RandomMatrix(rng, g.NumNodes(), 3);
  const auto phi = MessageFunc::CopyLhs(Target::kSrc);
  auto fwd = GSpMM(g, phi, ReduceOp::kSum, x, x);
  OperandGrads r = GSpMMBackward(g, phi, ReduceOp::kSum, &x, nullptr, fwd, dz);
  EXPECT_LT(testing::RelErr(*r.lhs, MatMul(testing::DenseAdjacency(g), dz)), 1e-12);
}

TEST(Backward, MaxRoutesOnlyThroughArgEdge) {
  Graph g(3, {0, 1}, {2, 2});
  FeatureMatrix x(3, 1, 1.0);
  FeatureMatrix w = FeatureMatrix::FromRows({{0.2}, {0.9}});
  const auto phi = MessageFunc::Binary(BinaryOp::kMul, Target::kSrc, Target::kEdge);
  NodeEdgeData d{&x, nullptr, &w};
  auto fwd = GSpMM(g, phi, ReduceOp::kMax, d);
  GradBundle b = GSpMMBackward(g, phi, ReduceOp::kMax, d, fwd, FeatureMatrix(3, 1, 1.0));
  EXPECT_EQ(*b.dw, FeatureMatrix::FromRows({{0}, {1}}));
  EXPECT_EQ(*b.dx, FeatureMatrix::FromRows({{0}, {0.9}, {0}}));
}

TEST(Backward, ZeroInDegreeRowContributesNothing) {
  Graph g(3, {0}, {1});
  FeatureMatrix x(3, 2, 1.0);
  FeatureMatrix dz(3, 2, 0.0);
  dz(2, 0) = dz(2, 1) = 7.0;  // node 2 has no in-edges
  dz(0, 0) = 3.0;             // neither has node 0
  const auto phi = MessageFunc::CopyLhs(Target::kSrc);
  for (ReduceOp rho : {ReduceOp::kSum, ReduceOp::kMean, ReduceOp::kMax}) {
    auto fwd = GSpMM(g, phi, rho, x, x);
    OperandGrads r = GSpMMBackward(g, phi, rho, &x, nullptr, fwd, dz);
    EXPECT_EQ(*r.lhs, FeatureMatrix(3, 2, 0.0));
  }
}

TEST(Backward, MissingAuxIsAnError) {
  Graph g = G3();
  FeatureMatrix x(3, 1, 1.0);
  SpmmResult empty;
  EXPECT_THROW(GSpMMBackward(g, MessageFunc::CopyLhs(Target::kSrc), ReduceOp::kMean, &x,
                             nullptr, empty, x),
               Error);
  EXPECT_THROW(GSpMMBackward(g, MessageFunc::CopyLhs(Target::kSrc), ReduceOp::kMax, &x,
                             nullptr, empty, x),
               Error);
  EXPECT_THROW(GSpMMBackward(g, MessageFunc::CopyLhs(Target::kSrc), ReduceOp::kSum, &x,
                             nullptr, empty, FeatureMatrix(3, 2)),
               Error);
}

TEST(Backward, SumBackwardIsLinear) {
  std::mt19937_64 rng(3);
  Graph g = testing::RandomGraph(rng, 20, 100);
  FeatureMatrix x = testing::RandomMatrix(rng, g.NumNodes(), 4);
  FeatureMatrix w = testing::RandomMatrix(rng, g.NumEdges(), 4);
  const auto phi = MessageFunc::Binary(BinaryOp::kMul, Target::kSrc, Target::kEdge);
  auto fwd = GSpMM(g, phi, ReduceOp::kSum, x, w);
  FeatureMatrix d1 = testing::RandomMatrix(rng, g.NumNodes(), 4);
  FeatureMatrix d2 = testing::RandomMatrix(rng, g.NumNodes(), 4);
  const double a = 0.7, b = -1.3;
  auto g1 = GSpMMBackward(g, phi, ReduceOp::kSum, &x, &w, fwd, d1);
  auto g2 = GSpMMBackward(g, phi, ReduceOp::kSum, &x, &w, fwd, d2);
  auto gc = GSpMMBackward(g, phi, ReduceOp::kSum, &x, &w, fwd,
                          mpg::Add(Scale(d1, a), Scale(d2, b)));
  EXPECT_LT(testing::RelErr(*gc.lhs, mpg::Add(Scale(*g1.lhs, a), Scale(*g2.lhs, b))), 1e-12);
  EXPECT_LT(testing::RelErr(*gc.rhs, mpg::Add(Scale(*g1.rhs, a), Scale(*g2.rhs, b))), 1e-12);
}

TEST(Backward, ReverseGraphReusesForwardCsr) {
  std::mt19937_64 rng(4);
  Graph g = testing::RandomGraph(rng, 20, 100);
  FeatureMatrix x = testing::RandomMatrix(rng, g.NumNodes(), 2);
  g.Csr();
  const auto phi = MessageFunc::CopyLhs(Target::kSrc);
  auto fwd = GSpMM(g, phi, ReduceOp::kSum, x, x);
  const uint64_t before = g.ConversionCount();
  DispatchCapture cap;
  GSpMMBackward(g, phi, ReduceOp::kSum, &x, nullptr, fwd, x);
  EXPECT_EQ(g.ConversionCount(), before);
  ASSERT_EQ(cap.Count(), 1u);
  EXPECT_EQ(cap.Records()[0].graph_id, g.Reverse().Id());
  EXPECT_EQ(cap.Records()[0].strategy, "np:csc");
}

// -- gradient checks over every built-in combination -------------------------

struct GradCase {
  MessageFunc phi;
  size_t ldim, rdim;
};

std::vector<GradCase> GradCases() {
  std::vector<GradCase> out;
  const Target ts[] = {Target::kSrc, Target::kDst, Target::kEdge};
  for (Target t : ts) {
    out.push_back({MessageFunc::CopyLhs(t), 2, 2});
    out.push_back({MessageFunc::CopyRhs(t), 2, 2});
  }
  for (Target l : ts)
    for (Target r : ts) {
      for (BinaryOp op : {BinaryOp::kAdd, BinaryOp::kSub, BinaryOp::kMul, BinaryOp::kDiv}) {
        out.push_back({MessageFunc::Binary(op, l, r), 2, 2});
        out.push_back({MessageFunc::Binary(op, l, r), 4, 2});
        out.push_back({MessageFunc::Binary(op, l, r), 1, 3});
      }
      out.push_back({MessageFunc::Dot(l, r), 3, 3});
      out.push_back({MessageFunc::Dot(l, r, 2), 4, 4});
    }
  return out;
}

TEST(GradCheck, EveryKernelCombination) {
  std::mt19937_64 rng(5);
  for (const GradCase& c : GradCases()) {
    Graph g = testing::RandomGraph(rng, 8, 20, 2);
    auto rows = [&](Target t) { return t == Target::kEdge ? g.NumEdges() : g.NumNodes(); };
    std::vector<FeatureMatrix> leaves{
        testing::RandomMatrix(rng, rows(c.phi.lhs), c.ldim),
        c.phi.op == BinaryOp::kDiv ? testing::RandomDivisor(rng, rows(c.phi.rhs), c.rdim)
                                   : testing::RandomMatrix(rng, rows(c.phi.rhs), c.rdim)};
    const size_t odim = MessageDim(c.phi, c.ldim, c.rdim);
    FeatureMatrix probe_e = testing::RandomMatrix(rng, g.NumEdges(), odim);
    FeatureMatrix probe_n = testing::RandomMatrix(rng, g.NumNodes(), odim);
    auto sddmm = [&](Tape& t, const std::vector<Var>& v) {
      return ops::SumProduct(t, ops::GSDDMM(t, g, c.phi, v[0], v[1]), probe_e);
    };
    auto rep = GradCheck(sddmm, leaves);
    EXPECT_EQ(rep.checked, leaves[0].size() + leaves[1].size());
    EXPECT_TRUE(rep.passed()) << "gsddmm " << c.phi.Name() << " err " << rep.max_rel_error;
    for (ReduceOp rho : {ReduceOp::kSum, ReduceOp::kMean, ReduceOp::kMax, ReduceOp::kMin}) {
      auto spmm = [&](Tape& t, const std::vector<Var>& v) {
        return ops::SumProduct(t, ops::GSpMM(t, g, c.phi, rho, v[0], v[1]), probe_n);
      };
      auto r2 = GradCheck(spmm, leaves);
      EXPECT_TRUE(r2.passed()) << "gspmm " << c.phi.Name() << " " << ReduceName(rho)
                               << " err " << r2.max_rel_error;
    }
  }
}

TEST(GradCheck, FlagsCorruptedBackward) {
  auto f = [](Tape& t, const std::vector<Var>& v) {
    const FeatureMatrix& x = t.Value(v[0]);
    FeatureMatrix sq(1, 1, x(0, 0) * x(0, 0));
    return t.Record("bad_square", std::move(sq), {v[0]},
                    [x](const FeatureMatrix& d, const std::vector<bool>&) {
                      return std::vector<std::optional<FeatureMatrix>>{
                          FeatureMatrix(1, 1, 3 * x(0, 0) * d(0, 0))};
                    });
  };
  auto rep = GradCheck(f, {FeatureMatrix(1, 1, 0.8)});
  EXPECT_FALSE(rep.passed());
  ASSERT_EQ(rep.failures.size(), 1u);
  EXPECT_EQ(rep.failures[0].leaf, 0u);
}

TEST(Tape, ErrorsAndAccumulation) {
  Tape t;
  EXPECT_THROW(t.Backward(Var{0}), Error);
  Var x = t.Leaf(FeatureMatrix::FromRows({{1, 2}}), true);
  Var c = t.Leaf(FeatureMatrix::FromRows({{3, 4}}), false);
  try {
    t.Backward(x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShape);
  }
  // z = x + c used twice
  Var z = ops::Add(t, x, c);
  Var a = ops::SumProduct(t, z, FeatureMatrix::FromRows({{1, 1}}));
  Var b = ops::SumProduct(t, z, FeatureMatrix::FromRows({{2, -1}}));
  Var loss = ops::Add(t, a, b);
  t.Backward(loss);
  ASSERT_TRUE(t.Grad(x));
  EXPECT_EQ(*t.Grad(x), FeatureMatrix::FromRows({{3, 0}}));
  EXPECT_EQ(t.Grad(c), nullptr);
  EXPECT_THROW(t.Value(Var{99}), Error);
}

TEST(Tape, GspmmIntoXentMatchesFiniteDifferences) {
  std::mt19937_64 rng(6);
  Graph g = testing::RandomGraph(rng, 64, 256, 64);
  std::vector<int32_t> labels(g.NumNodes());
  for (auto& y : labels) y = std::uniform_int_distribution<int32_t>(0, 2)(rng);
  FeatureMatrix x = testing::RandomMatrix(rng, g.NumNodes(), 3);
  auto f = [&](Tape& t, const std::vector<Var>& v) {
    return ops::XentLoss(
        t, ops::GSpMM(t, g, MessageFunc::CopyLhs(Target::kSrc), ReduceOp::kMean, v[0], Var{}),
        labels);
  };
  auto rep = GradCheck(f, {x});
  EXPECT_LT(rep.max_rel_error, 1e-6);
}

TEST(Tape, DenseOpsPassGradCheck) {
  std::mt19937_64 rng(7);
  std::vector<FeatureMatrix> leaves{testing::RandomMatrix(rng, 5, 4),
                                    testing::RandomMatrix(rng, 4, 6),
                                    testing::RandomMatrix(rng, 1, 6),
                                    testing::RandomMatrix(rng, 1, 6)};
  std::vector<int32_t> labels{0, 5, -1, 2, 3};
  FeatureMatrix probe = testing::RandomMatrix(rng, 5, 2);
  auto f = [&](Tape& t, const std::vector<Var>& v) {
    Var h = ops::Relu(t, ops::AddBias(t, ops::MatMul(t, v[0], v[1]), v[2]));
    Var s = ops::SoftmaxRows(t, ops::Scale(t, h, 1.5));
    Var e = ops::Exp(t, ops::Scale(t, s, 0.5));
    Var hd = ops::HeadDot(t, e, v[3], 2);
    return ops::Add(t, ops::XentLoss(t, h, labels), ops::SumProduct(t, hd, probe));
  };
  auto rep = GradCheck(f, leaves);
  EXPECT_TRUE(rep.passed()) << rep.max_rel_error;
}

TEST(Tape, UnfusedOpsPassGradCheck) {
  std::mt19937_64 rng(8);
  Graph g = testing::RandomGraph(rng, 10, 30, 3);
  auto src = std::make_shared<std::vector<NodeId>>(g.Src().begin(), g.Src().end());
  auto dst = std::make_shared<std::vector<NodeId>>(g.Dst().begin(), g.Dst().end());
  std::vector<FeatureMatrix> leaves{testing::RandomMatrix(rng, g.NumNodes(), 4),
                                    testing::RandomMatrix(rng, g.NumEdges(), 2)};
  FeatureMatrix probe = testing::RandomMatrix(rng, g.NumNodes(), 4);
  auto f = [&](Tape& t, const std::vector<Var>& v) {
    Var m = ops::MulHeadBroadcast(t, ops::GatherRows(t, v[0], src), v[1]);
    return ops::SumProduct(t, ops::ScatterAddRows(t, m, dst, g.NumNodes()), probe);
  };
  EXPECT_TRUE(GradCheck(f, leaves).passed());
  // and it equals the fused u_mul_e sum
  Tape t;
  Var x = t.Leaf(leaves[0]), w = t.Leaf(leaves[1]);
  Var unfused = ops::ScatterAddRows(t, ops::MulHeadBroadcast(t, ops::GatherRows(t, x, src), w),
                                    dst, g.NumNodes());
  Var fused = ops::GSpMM(t, g, MessageFunc::Binary(BinaryOp::kMul, Target::kSrc, Target::kEdge),
                         ReduceOp::kSum, x, w, {Strategy::kSerialReference});
  EXPECT_LT(testing::RelErr(t.Value(unfused), t.Value(fused)), 1e-12);
}

TEST(Backward, OnlyGraphKernelsAndReverseForSources) {
  std::mt19937_64 rng(9);
  Graph g = testing::RandomGraph(rng, 16, 60, 4);
  FeatureMatrix x = testing::RandomMatrix(rng, g.NumNodes(), 2);
  FeatureMatrix y = testing::RandomMatrix(rng, g.NumNodes(), 2);
  FeatureMatrix w = testing::RandomDivisor(rng, g.NumEdges(), 2);
  for (BinaryOp op : {BinaryOp::kAdd, BinaryOp::kSub, BinaryOp::kMul, BinaryOp::kDiv}) {
    for (auto [l, r] : {std::pair{Target::kSrc, Target::kEdge},
                        std::pair{Target::kEdge, Target::kDst}}) {
      const auto phi = MessageFunc::Binary(op, l, r);
      NodeEdgeData d{&x, &y, &w};
      auto fwd = GSpMM(g, phi, ReduceOp::kMean, d);
      DispatchCapture cap;
      GSpMMBackward(g, phi, ReduceOp::kMean, d, fwd, x);
      for (const auto& rec : cap.Records())
        EXPECT_TRUE(rec.kernel == "gspmm" || rec.kernel == "gsddmm") << rec.ToString();
      EXPECT_EQ(cap.Records().back().kernel, l == Target::kSrc ? "gsddmm" : "gspmm");
    }
  }
}

}  // namespace
}  // namespace mpg
