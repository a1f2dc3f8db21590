/*!
 *  Copyright (c) 2026 by Contributors
 * \file autodiff.cc
 * \brief Backward of g-SpMM and g-SDDMM as g-SpMM/g-SDDMM calls.
 *
 *  For an operand P of message phi, the per-edge gradient is itself a message
 *  built from the incoming gradient G and the other operand. It is reduced to
 *  P's rows by the kernel matching P's target: g-SDDMM for edges, g-SpMM on
 *  the graph for destinations, g-SpMM on the reverse graph for sources.
 */
#include <mpgraph/autodiff.h>

#include <utility>

namespace mpg {
namespace {

Target Flip(Target t) {
  if (t == Target::kSrc) return Target::kDst;
  if (t == Target::kDst) return Target::kSrc;
  return t;
}

/*! \brief One backward message: op(lhs, rhs) with explicit targets. */
struct Term {
  BinaryOp op = BinaryOp::kCopyLhs;
  Operand lhs;
  Target lhs_target = Target::kEdge;
  Operand rhs;
  Target rhs_target = Target::kEdge;
  uint32_t heads = 1;

  MessageFunc Func(bool flip) const {
    MessageFunc f{op, lhs_target, rhs_target, heads};
    if (op == BinaryOp::kCopyLhs) f.rhs = f.lhs;
    if (flip) {
      f.lhs = Flip(f.lhs);
      f.rhs = Flip(f.rhs);
    }
    return f;
  }
};

KernelOptions BackwardOptions(const KernelOptions& opts) {
  KernelOptions o = opts;
  o.format = Format::kAuto;
  return o;
}

FeatureMatrix Reduce(const Graph& g, const Term& t, Target dest, const KernelOptions& opts) {
  const KernelOptions o = BackwardOptions(opts);
  if (dest == Target::kEdge) return GSDDMM(g, t.Func(false), t.lhs, t.rhs, o);
  if (dest == Target::kDst) return GSpMM(g, t.Func(false), ReduceOp::kSum, t.lhs, t.rhs, o).out;
  return GSpMM(g.Reverse(), t.Func(true), ReduceOp::kSum, t.lhs, t.rhs, o).out;
}

struct GradSource {
  const FeatureMatrix* data;
  Target target;
  GradientGate gate;
};

/*!
 * \brief Gradient of the lhs (`of_lhs`) or rhs operand. `a` and `b` are the
 *  forward lhs and rhs; `src` is the gradient w.r.t. each message.
 */
FeatureMatrix OperandGradient(const Graph& g, const MessageFunc& phi, bool of_lhs,
                              const FeatureMatrix* a, const FeatureMatrix* b,
                              const GradSource& src, const KernelOptions& opts) {
  const Target tp = of_lhs ? phi.lhs : phi.rhs;
  const Target tq = of_lhs ? phi.rhs : phi.lhs;
  const FeatureMatrix* p = of_lhs ? a : b;
  const FeatureMatrix* q = of_lhs ? b : a;
  const size_t pdim = p->cols();
  const size_t odim = src.data->cols();
  const bool broadcast = pdim < odim;
  const KernelOptions o = BackwardOptions(opts);

  Term t;
  t.lhs = Operand(*src.data, src.gate);
  t.lhs_target = src.target;

  // Width-odim node-keyed ones: summing a block of a per-edge vector is a
  // dot against ones, which keeps broadcast gradients inside the kernels.
  std::optional<FeatureMatrix> ones;
  auto block_sum = [&](Term* term) {
    ones.emplace(g.NumNodes(), odim, 1.0);
    term->op = BinaryOp::kDot;
    term->rhs = Operand(*ones);
    term->rhs_target = Target::kSrc;
    term->heads = static_cast<uint32_t>(pdim);
  };

  switch (phi.op) {
    case BinaryOp::kCopyLhs:
    case BinaryOp::kCopyRhs:
      t.op = BinaryOp::kCopyLhs;
      return Reduce(g, t, tp, opts);
    case BinaryOp::kAdd:
    case BinaryOp::kSub:
      if (phi.op == BinaryOp::kSub && !of_lhs) t.lhs.gate.scale = -t.lhs.gate.scale;
      if (broadcast) {
        block_sum(&t);
      } else {
        t.op = BinaryOp::kCopyLhs;
      }
      return Reduce(g, t, tp, opts);
    case BinaryOp::kMul:
      t.op = broadcast ? BinaryOp::kDot : BinaryOp::kMul;
      t.rhs = Operand(*q);
      t.rhs_target = tq;
      t.heads = broadcast ? static_cast<uint32_t>(pdim) : 1;
      return Reduce(g, t, tp, opts);
    case BinaryOp::kDiv:
      if (of_lhs) {
        t.op = BinaryOp::kDiv;
        t.rhs = Operand(*b);
        t.rhs_target = phi.rhs;
        if (!broadcast) return Reduce(g, t, tp, opts);
        // sum over the block of g / b
        const FeatureMatrix ratio = GSDDMM(g, t.Func(false), t.lhs, t.rhs, o);
        Term s;
        s.lhs = Operand(ratio);
        s.lhs_target = Target::kEdge;
        block_sum(&s);
        return Reduce(g, s, tp, opts);
      } else {
        // d(a/b)/db = -(a/b)/b
        const FeatureMatrix q1 =
            GSDDMM(g, MessageFunc::Binary(BinaryOp::kDiv, phi.lhs, phi.rhs), *a, *b, o);
        const FeatureMatrix q2 =
            GSDDMM(g, MessageFunc::Binary(BinaryOp::kDiv, Target::kEdge, phi.rhs), q1, *b, o);
        t.lhs.gate.scale = -t.lhs.gate.scale;
        t.op = broadcast ? BinaryOp::kDot : BinaryOp::kMul;
        t.rhs = Operand(q2);
        t.rhs_target = Target::kEdge;
        t.heads = broadcast ? static_cast<uint32_t>(pdim) : 1;
        return Reduce(g, t, tp, opts);
      }
    case BinaryOp::kDot: {
      // per-head gradient scalar times the other operand
      Term d;
      d.op = BinaryOp::kMul;
      d.lhs = Operand(*q);
      d.lhs_target = tq;
      d.rhs = Operand(*src.data, src.gate);
      d.rhs_target = src.target;
      return Reduce(g, d, tp, opts);
    }
  }
  MPG_FAIL(ErrorCode::kInternal, "unknown message op");
}

size_t ForwardDim(const MessageFunc& phi, const FeatureMatrix* lhs, const FeatureMatrix* rhs) {
  if (phi.UsesLhs()) MPG_CHECK_ARG(lhs, phi.Name() << " backward needs the lhs operand");
  if (phi.UsesRhs()) MPG_CHECK_ARG(rhs, phi.Name() << " backward needs the rhs operand");
  return MessageDim(phi, phi.UsesLhs() ? lhs->cols() : 0, phi.UsesRhs() ? rhs->cols() : 0);
}

OperandGrads RunBackward(const Graph& g, const MessageFunc& phi, const FeatureMatrix* lhs,
                         const FeatureMatrix* rhs, const GradSource& src, GradRequest want,
                         const KernelOptions& opts) {
  OperandGrads out;
  if (want.lhs && phi.UsesLhs())
    out.lhs = OperandGradient(g, phi, true, lhs, rhs, src, opts);
  if (want.rhs && phi.UsesRhs())
    out.rhs = OperandGradient(g, phi, false, lhs, rhs, src, opts);
  return out;
}

GradBundle ToBundle(const MessageFunc& phi, OperandGrads grads) {
  GradBundle b;
  auto slot = [&](Target t) -> std::optional<FeatureMatrix>& {
    return t == Target::kSrc ? b.dx : t == Target::kDst ? b.dy : b.dw;
  };
  if (grads.lhs) slot(phi.lhs) = std::move(grads.lhs);
  if (grads.rhs) {
    auto& s = slot(phi.rhs);
    if (s) {
      AddInPlace(&*s, *grads.rhs);
    } else {
      s = std::move(grads.rhs);
    }
  }
  return b;
}

}  // namespace

OperandGrads GSDDMMBackward(const Graph& g, const MessageFunc& phi, const FeatureMatrix* lhs,
                            const FeatureMatrix* rhs, const FeatureMatrix& d_out,
                            GradRequest want, const KernelOptions& opts) {
  const size_t odim = ForwardDim(phi, lhs, rhs);
  MPG_CHECK_SHAPE(d_out.rows() == g.NumEdges() && d_out.cols() == odim,
                  phi.Name() << " backward: output gradient is " << d_out.ShapeString()
                             << ", expected " << g.NumEdges() << "x" << odim);
  return RunBackward(g, phi, lhs, rhs, {&d_out, Target::kEdge, {}}, want, opts);
}

OperandGrads GSpMMBackward(const Graph& g, const MessageFunc& phi, ReduceOp rho,
                           const FeatureMatrix* lhs, const FeatureMatrix* rhs,
                           const SpmmResult& forward, const FeatureMatrix& d_out,
                           GradRequest want, const KernelOptions& opts) {
  const size_t odim = ForwardDim(phi, lhs, rhs);
  MPG_CHECK_SHAPE(d_out.rows() == g.NumNodes() && d_out.cols() == odim,
                  phi.Name() << " backward: output gradient is " << d_out.ShapeString()
                             << ", expected " << g.NumNodes() << "x" << odim);
  GradientGate gate;
  if (rho == ReduceOp::kMean) {
    MPG_CHECK_ARG(forward.in_degrees.size() == g.NumNodes(),
                  "mean backward needs the forward degree vector");
    gate.mean_degrees = &forward.in_degrees;
  } else if (rho == ReduceOp::kMax || rho == ReduceOp::kMin) {
    MPG_CHECK_ARG(forward.arg_extrema.has_value(),
                  ReduceName(rho) << " backward needs the forward arg table");
    gate.arg = &*forward.arg_extrema;
  }
  return RunBackward(g, phi, lhs, rhs, {&d_out, Target::kDst, gate}, want, opts);
}

GradBundle GSDDMMBackward(const Graph& g, const MessageFunc& phi, const NodeEdgeData& data,
                          const FeatureMatrix& d_out, const KernelOptions& opts) {
  return ToBundle(phi, GSDDMMBackward(g, phi, data.ForTarget(phi.lhs),
                                      data.ForTarget(phi.rhs), d_out, {}, opts));
}

GradBundle GSpMMBackward(const Graph& g, const MessageFunc& phi, ReduceOp rho,
                         const NodeEdgeData& data, const SpmmResult& forward,
                         const FeatureMatrix& d_out, const KernelOptions& opts) {
  return ToBundle(phi, GSpMMBackward(g, phi, rho, data.ForTarget(phi.lhs),
                                     data.ForTarget(phi.rhs), forward, d_out, {}, opts));
}

}  // namespace mpg
