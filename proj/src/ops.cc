/*!
 *  Copyright (c) 2026 by Contributors
 * \file ops.cc
 * \brief Taped dense ops, fused graph ops and the unfused message baseline.
 */
#include <mpgraph/dispatch_log.h>
#include <mpgraph/ops.h>

#include <cmath>
#include <utility>

namespace mpg {
namespace ops {
namespace {

using Grads = std::vector<std::optional<FeatureMatrix>>;

void LogOp(const char* kernel, const char* name, const FeatureMatrix& m) {
  if (!DispatchLoggingActive()) return;
  LogDispatch({kernel, -1, name, "-", "-", m.rows(), m.cols()});
}

FeatureMatrix Logged(const char* name, FeatureMatrix m) {
  LogOp("dense", name, m);
  return m;
}

void CheckLabels(const FeatureMatrix& logits, const std::vector<int32_t>& labels) {
  MPG_CHECK_SHAPE(labels.size() == logits.rows(),
                  "xent: " << labels.size() << " labels for " << logits.rows() << " rows");
  for (size_t i = 0; i < labels.size(); ++i) {
    MPG_CHECK_RANGE(labels[i] < static_cast<int32_t>(logits.cols()),
                    "xent: label " << labels[i] << " of row " << i << " is out of range [0, "
                                   << logits.cols() << ")");
  }
}

}  // namespace

Var MatMul(Tape& t, Var a, Var b) {
  auto av = t.Shared(a), bv = t.Shared(b);
  return t.Record("matmul", Logged("matmul", mpg::MatMul(*av, *bv)), {a, b},
                  [av, bv](const FeatureMatrix& d, const std::vector<bool>& need) {
                    Grads g(2);
                    if (need[0]) g[0] = Logged("matmul_nt", MatMulNT(d, *bv));
                    if (need[1]) g[1] = Logged("matmul_tn", MatMulTN(*av, d));
                    return g;
                  });
}

Var Add(Tape& t, Var a, Var b) {
  return t.Record("add", Logged("add", mpg::Add(t.Value(a), t.Value(b))), {a, b},
                  [](const FeatureMatrix& d, const std::vector<bool>& need) {
                    Grads g(2);
                    if (need[0]) g[0] = d;
                    if (need[1]) g[1] = d;
                    return g;
                  });
}

Var AddBias(Tape& t, Var x, Var bias) {
  const FeatureMatrix& xv = t.Value(x);
  const FeatureMatrix& bv = t.Value(bias);
  MPG_CHECK_SHAPE(bv.rows() == 1 && bv.cols() == xv.cols(),
                  "bias " << bv.ShapeString() << " does not fit " << xv.ShapeString());
  FeatureMatrix out = xv;
  for (size_t r = 0; r < out.rows(); ++r)
    for (size_t c = 0; c < out.cols(); ++c) out(r, c) += bv(0, c);
  return t.Record("add_bias", Logged("add_bias", std::move(out)), {x, bias},
                  [](const FeatureMatrix& d, const std::vector<bool>& need) {
                    Grads g(2);
                    if (need[0]) g[0] = d;
                    if (need[1]) {
                      FeatureMatrix db(1, d.cols());
                      for (size_t r = 0; r < d.rows(); ++r)
                        for (size_t c = 0; c < d.cols(); ++c) db(0, c) += d(r, c);
                      g[1] = std::move(db);
                    }
                    return g;
                  });
}

Var Scale(Tape& t, Var a, double s) {
  return t.Record("scale", Logged("scale", mpg::Scale(t.Value(a), s)), {a},
                  [s](const FeatureMatrix& d, const std::vector<bool>&) {
                    return Grads{Logged("scale", mpg::Scale(d, s))};
                  });
}

Var Relu(Tape& t, Var a) {
  auto av = t.Shared(a);
  return t.Record("relu", Logged("relu", mpg::Relu(*av)), {a},
                  [av](const FeatureMatrix& d, const std::vector<bool>&) {
                    FeatureMatrix g = d;
                    const double* x = av->data();
                    for (size_t i = 0; i < g.size(); ++i)
                      if (!(x[i] > 0)) g.data()[i] = 0.0;
                    return Grads{Logged("relu_grad", std::move(g))};
                  });
}

Var Exp(Tape& t, Var a) {
  auto out = std::make_shared<FeatureMatrix>(Logged("exp", mpg::Exp(t.Value(a))));
  return t.Record("exp", *out, {a}, [out](const FeatureMatrix& d, const std::vector<bool>&) {
    return Grads{Logged("exp_grad", Hadamard(d, *out))};
  });
}

Var SoftmaxRows(Tape& t, Var a) {
  auto s = std::make_shared<FeatureMatrix>(Logged("softmax", mpg::SoftmaxRows(t.Value(a))));
  return t.Record("softmax_rows", *s, {a},
                  [s](const FeatureMatrix& d, const std::vector<bool>&) {
                    FeatureMatrix g(d.rows(), d.cols());
                    for (size_t r = 0; r < d.rows(); ++r) {
                      double dot = 0.0;
                      for (size_t c = 0; c < d.cols(); ++c) dot += d(r, c) * (*s)(r, c);
                      for (size_t c = 0; c < d.cols(); ++c)
                        g(r, c) = (*s)(r, c) * (d(r, c) - dot);
                    }
                    return Grads{Logged("softmax_grad", std::move(g))};
                  });
}

Var XentLoss(Tape& t, Var logits, std::vector<int32_t> labels) {
  auto lv = t.Shared(logits);
  CheckLabels(*lv, labels);
  FeatureMatrix loss(1, 1, mpg::XentLoss(*lv, labels));
  LogOp("dense", "xent", loss);
  return t.Record("xent", std::move(loss), {logits},
                  [lv, labels = std::move(labels)](const FeatureMatrix& d,
                                                   const std::vector<bool>&) {
                    FeatureMatrix p = mpg::SoftmaxRows(*lv);
                    size_t count = 0;
                    for (int32_t y : labels) count += y >= 0;
                    const double w = count ? d(0, 0) / static_cast<double>(count) : 0.0;
                    for (size_t r = 0; r < p.rows(); ++r) {
                      if (labels[r] < 0) {
                        for (double& x : p.row(r)) x = 0.0;
                        continue;
                      }
                      p(r, labels[r]) -= 1.0;
                      for (double& x : p.row(r)) x *= w;
                    }
                    return Grads{Logged("xent_grad", std::move(p))};
                  });
}

Var SumProduct(Tape& t, Var x, FeatureMatrix weights) {
  const FeatureMatrix& xv = t.Value(x);
  MPG_CHECK_SHAPE(xv.SameShape(weights), "sum_product: " << xv.ShapeString() << " vs "
                                                         << weights.ShapeString());
  double s = 0.0;
  for (size_t i = 0; i < xv.size(); ++i) s += xv.data()[i] * weights.data()[i];
  auto w = std::make_shared<const FeatureMatrix>(std::move(weights));
  return t.Record("sum_product", Logged("sum_product", FeatureMatrix(1, 1, s)), {x},
                  [w](const FeatureMatrix& d, const std::vector<bool>&) {
                    return Grads{Logged("sum_product_grad", mpg::Scale(*w, d(0, 0)))};
                  });
}

Var HeadDot(Tape& t, Var feat, Var vec, uint32_t heads) {
  auto fv = t.Shared(feat), vv = t.Shared(vec);
  MPG_CHECK_SHAPE(heads > 0 && vv->rows() == 1 && vv->cols() == fv->cols() &&
                      fv->cols() % heads == 0,
                  "head_dot: features " << fv->ShapeString() << ", vector " << vv->ShapeString()
                                        << ", " << heads << " heads");
  const size_t w = fv->cols() / heads;
  FeatureMatrix out(fv->rows(), heads);
  for (size_t r = 0; r < fv->rows(); ++r)
    for (size_t j = 0; j < fv->cols(); ++j) out(r, j / w) += (*fv)(r, j) * (*vv)(0, j);
  return t.Record("head_dot", Logged("head_dot", std::move(out)), {feat, vec},
                  [fv, vv, w](const FeatureMatrix& d, const std::vector<bool>& need) {
                    Grads g(2);
                    if (need[0]) {
                      FeatureMatrix df(fv->rows(), fv->cols());
                      for (size_t r = 0; r < df.rows(); ++r)
                        for (size_t j = 0; j < df.cols(); ++j)
                          df(r, j) = d(r, j / w) * (*vv)(0, j);
                      g[0] = Logged("head_dot_grad", std::move(df));
                    }
                    if (need[1]) {
                      FeatureMatrix dv(1, vv->cols());
                      for (size_t r = 0; r < fv->rows(); ++r)
                        for (size_t j = 0; j < fv->cols(); ++j)
                          dv(0, j) += d(r, j / w) * (*fv)(r, j);
                      g[1] = Logged("head_dot_grad", std::move(dv));
                    }
                    return g;
                  });
}

namespace {

/*! \brief Inputs actually read by phi, and where each lands in the input list. */
struct OperandVars {
  std::vector<Var> inputs;
  int lhs_slot = -1;
  int rhs_slot = -1;
  std::shared_ptr<const FeatureMatrix> lhs, rhs;
};

OperandVars Collect(Tape& t, const MessageFunc& phi, Var lhs, Var rhs) {
  OperandVars o;
  if (phi.UsesLhs()) {
    MPG_CHECK_ARG(lhs.valid(), phi.Name() << " needs an lhs input");
    o.lhs = t.Shared(lhs);
    o.lhs_slot = static_cast<int>(o.inputs.size());
    o.inputs.push_back(lhs);
  }
  if (phi.UsesRhs()) {
    MPG_CHECK_ARG(rhs.valid(), phi.Name() << " needs an rhs input");
    o.rhs = t.Shared(rhs);
    o.rhs_slot = static_cast<int>(o.inputs.size());
    o.inputs.push_back(rhs);
  }
  return o;
}

Grads Place(const OperandVars& o, OperandGrads g) {
  Grads out(o.inputs.size());
  if (o.lhs_slot >= 0) out[o.lhs_slot] = std::move(g.lhs);
  if (o.rhs_slot >= 0) out[o.rhs_slot] = std::move(g.rhs);
  return out;
}

GradRequest Wanted(const OperandVars& o, const std::vector<bool>& need) {
  return {o.lhs_slot >= 0 && need[o.lhs_slot], o.rhs_slot >= 0 && need[o.rhs_slot]};
}

}  // namespace

Var GSpMM(Tape& t, const Graph& g, const MessageFunc& phi, ReduceOp rho, Var lhs, Var rhs,
          const KernelOptions& opts) {
  OperandVars o = Collect(t, phi, lhs, rhs);
  auto result = std::make_shared<SpmmResult>(
      mpg::GSpMM(g, phi, rho, o.lhs.get(), o.rhs.get(), opts));
  FeatureMatrix out = std::move(result->out);
  result->out = FeatureMatrix();
  std::vector<Var> inputs = o.inputs;
  return t.Record(std::string("gspmm:") + phi.Name() + ":" + ReduceName(rho), std::move(out),
                  std::move(inputs),
                  [g, phi, rho, o, result, opts](const FeatureMatrix& d,
                                                 const std::vector<bool>& need) {
                    return Place(o, GSpMMBackward(g, phi, rho, o.lhs.get(), o.rhs.get(),
                                                  *result, d, Wanted(o, need), opts));
                  });
}

Var GSDDMM(Tape& t, const Graph& g, const MessageFunc& phi, Var lhs, Var rhs,
           const KernelOptions& opts) {
  OperandVars o = Collect(t, phi, lhs, rhs);
  FeatureMatrix out = mpg::GSDDMM(g, phi, o.lhs.get(), o.rhs.get(), opts);
  std::vector<Var> inputs = o.inputs;
  return t.Record(std::string("gsddmm:") + phi.Name(), std::move(out), std::move(inputs),
                  [g, phi, o, opts](const FeatureMatrix& d, const std::vector<bool>& need) {
                    return Place(o, GSDDMMBackward(g, phi, o.lhs.get(), o.rhs.get(), d,
                                                   Wanted(o, need), opts));
                  });
}

Var EdgeSoftmax(Tape& t, const Graph& g, Var scores, const KernelOptions& opts) {
  MPG_CHECK_SHAPE(t.Value(scores).rows() == g.NumEdges(),
                  "edge softmax: scores have " << t.Value(scores).rows() << " rows for "
                                               << g.NumEdges() << " edges");
  const MessageFunc copy_e = MessageFunc::CopyRhs(Target::kEdge);
  Var top = GSpMM(t, g, copy_e, ReduceOp::kMax, Var{}, scores, opts);
  Var shifted =
      GSDDMM(t, g, MessageFunc::Binary(BinaryOp::kSub, Target::kEdge, Target::kDst), scores,
             top, opts);
  Var ex = Exp(t, shifted);
  Var denom = GSpMM(t, g, copy_e, ReduceOp::kSum, Var{}, ex, opts);
  return GSDDMM(t, g, MessageFunc::Binary(BinaryOp::kDiv, Target::kEdge, Target::kDst), ex,
                denom, opts);
}

namespace {

FeatureMatrix Gather(const FeatureMatrix& x, const std::vector<NodeId>& ids) {
  FeatureMatrix out = SliceRows(x, ids);
  LogOp("gather", "gather_rows", out);
  return out;
}

FeatureMatrix Scatter(const FeatureMatrix& m, const std::vector<NodeId>& ids, size_t rows) {
  MPG_CHECK_SHAPE(m.rows() == ids.size(),
                  "scatter: " << m.rows() << " rows for " << ids.size() << " ids");
  FeatureMatrix out(rows, m.cols());
  for (size_t i = 0; i < ids.size(); ++i) {
    MPG_CHECK_RANGE(ids[i] < rows, "scatter: id " << ids[i] << " out of range " << rows);
    auto dst = out.row(ids[i]);
    auto src = m.row(i);
    for (size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
  }
  LogOp("scatter", "scatter_add_rows", out);
  return out;
}

}  // namespace

Var GatherRows(Tape& t, Var x, std::shared_ptr<const std::vector<NodeId>> ids) {
  const size_t rows = t.Value(x).rows();
  return t.Record("gather_rows", Gather(t.Value(x), *ids), {x},
                  [ids, rows](const FeatureMatrix& d, const std::vector<bool>&) {
                    return Grads{Scatter(d, *ids, rows)};
                  });
}

Var ScatterAddRows(Tape& t, Var m, std::shared_ptr<const std::vector<NodeId>> ids,
                   size_t rows) {
  return t.Record("scatter_add_rows", Scatter(t.Value(m), *ids, rows), {m},
                  [ids](const FeatureMatrix& d, const std::vector<bool>&) {
                    return Grads{Gather(d, *ids)};
                  });
}

Var MulHeadBroadcast(Tape& t, Var msg, Var w) {
  auto mv = t.Shared(msg), wv = t.Shared(w);
  MPG_CHECK_SHAPE(mv->rows() == wv->rows() && wv->cols() > 0 && mv->cols() % wv->cols() == 0,
                  "mul_head_broadcast: " << mv->ShapeString() << " by " << wv->ShapeString());
  const size_t width = mv->cols() / wv->cols();
  FeatureMatrix out(mv->rows(), mv->cols());
  for (size_t e = 0; e < out.rows(); ++e)
    for (size_t j = 0; j < out.cols(); ++j) out(e, j) = (*mv)(e, j) * (*wv)(e, j / width);
  LogOp("gather", "mul_head_broadcast", out);
  return t.Record("mul_head_broadcast", std::move(out), {msg, w},
                  [mv, wv, width](const FeatureMatrix& d, const std::vector<bool>& need) {
                    Grads g(2);
                    if (need[0]) {
                      FeatureMatrix dm(d.rows(), d.cols());
                      for (size_t e = 0; e < d.rows(); ++e)
                        for (size_t j = 0; j < d.cols(); ++j)
                          dm(e, j) = d(e, j) * (*wv)(e, j / width);
                      g[0] = std::move(dm);
                    }
                    if (need[1]) {
                      FeatureMatrix dw(wv->rows(), wv->cols());
                      for (size_t e = 0; e < d.rows(); ++e)
                        for (size_t j = 0; j < d.cols(); ++j)
                          dw(e, j / width) += d(e, j) * (*mv)(e, j);
                      g[1] = std::move(dw);
                    }
                    LogOp("gather", "mul_head_broadcast_grad", d);
                    return g;
                  });
}

}  // namespace ops
}  // namespace mpg
